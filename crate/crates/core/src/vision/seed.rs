//! Sequential component sweeps that condition each component on the labels
//! already chosen on the other side of its deleted edges.

use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Component, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepDirection {
    LeftToRight,
    RightToLeft,
}

/// A deleted edge from `vertex` into an already solved component whose
/// endpoint there carries `label` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryPin {
    pub vertex: usize,
    pub edge: usize,
    pub label: usize,
}

/// Boundary values for one component, ordered by vertex then edge id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeedHint {
    pub pins: Vec<BoundaryPin>,
}

impl SeedHint {
    /// The label each boundary vertex is seeded with: the one across its
    /// lowest-id deleted edge.
    pub fn seeded_labels(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for p in &self.pins {
            if out.last().is_none_or(|&(v, _)| v != p.vertex) {
                out.push((p.vertex, p.label));
            }
        }
        out
    }
}

fn col_of(graph: &Graph, v: usize) -> usize {
    graph.coords().map_or(v, |c| c[v].col)
}

/// Component indices in sweep order. Left to right sorts by smallest column,
/// right to left by largest column descending; ties go to the smaller
/// lowest vertex. Without coordinates vertex ids stand in for columns.
pub fn sweep_order(graph: &Graph, components: &[Component], direction: SweepDirection) -> Vec<usize> {
    let mut order: Vec<usize> = (0..components.len()).collect();
    let lowest = |c: &Component| c.vertices[0];
    match direction {
        SweepDirection::LeftToRight => order.sort_by_key(|&i| {
            let c = &components[i];
            (c.vertices.iter().map(|&v| col_of(graph, v)).min(), lowest(c))
        }),
        SweepDirection::RightToLeft => order.sort_by_key(|&i| {
            let c = &components[i];
            (Reverse(c.vertices.iter().map(|&v| col_of(graph, v)).max()), lowest(c))
        }),
    }
    order
}

/// Hint for `components[order[position]]`: every deleted edge into an
/// earlier component, with the label solved at its far end. `partial` holds
/// the labels solved so far; a missing label on an earlier component is an
/// ordering error.
pub fn boundary_seed(
    graph: &Graph,
    kept: &[bool],
    components: &[Component],
    order: &[usize],
    position: usize,
    partial: &[Option<usize>],
) -> Result<SeedHint> {
    let mut rank = vec![usize::MAX; graph.num_vertices()];
    for (pos, &ci) in order.iter().enumerate() {
        for &v in &components[ci].vertices {
            rank[v] = pos;
        }
    }
    let current = components
        .get(*order.get(position).ok_or_else(|| Error::Ordering(format!("sweep position {position} out of range")))?)
        .ok_or_else(|| Error::Ordering("sweep order names a missing component".into()))?;

    let mut pins = Vec::new();
    for &v in &current.vertices {
        let mut across: Vec<(usize, usize)> = graph
            .neighbors(v)
            .iter()
            .filter(|&&(w, e)| !kept[e] && rank[w] < position)
            .map(|&(w, e)| (e, w))
            .collect();
        across.sort_unstable();
        for (e, w) in across {
            let label = partial[w].ok_or_else(|| {
                Error::Ordering(format!("vertex {v} is seeded across edge {e} from vertex {w}, which is not solved yet"))
            })?;
            pins.push(BoundaryPin { vertex: v, edge: e, label });
        }
    }
    Ok(SeedHint { pins })
}
