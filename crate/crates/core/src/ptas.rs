//! Baker-style approximation scheme for nonnegative instances.
//!
//! For each residue `j` in `0..k`, every edge whose r-level is congruent to
//! `j` mod `k` is deleted, each remaining component is solved exactly over
//! a branch decomposition, and the stitched assignment is scored on the
//! full instance. The best of the `k` candidates is returned; it is within
//! a factor `1 - 1/k` of the optimum.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{build_grid_band, build_heuristic, BranchDecomposition};
use crate::error::{Error, Result};
use crate::graph::{bfs_levels, connected_components, delete_level_classes, Component, LevelMap};
use crate::mrf::{evaluate_unchecked, Assignment, MrfInstance, Score};
use crate::solver::{best_vertex_label, with_workers, ExactSolver, DEFAULT_BYTE_BUDGET, DEFAULT_WIDTH_CAP};
use crate::vision::{boundary_seed, sweep_order, SeedHint, SweepDirection};

/// `ceil(1 / epsilon)`, so that `1 - 1/k >= 1 - epsilon`.
pub fn choose_k(epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    // absorb the rounding in 1/(1/3) and friends
    Ok((1.0 / epsilon - 1e-9).ceil() as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PtasConfig {
    /// Number of level classes; `k = ceil(1/epsilon)`.
    pub k: usize,
    /// BFS root; vertex 0 when unset.
    pub root: Option<usize>,
    pub width_cap: usize,
    pub byte_budget: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub workers: usize,
    /// Solve components one after another in this sweep order, conditioning
    /// each one on the labels already chosen across its deleted edges.
    pub seed_sweep: Option<SweepDirection>,
}

impl PtasConfig {
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        Self::with_k(choose_k(epsilon)?)
    }

    /// Direct choice of `k`; `k = 1` deletes every leveled edge.
    pub fn with_k(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSpec("k must be at least 1".into()));
        }
        Ok(PtasConfig {
            k,
            root: None,
            width_cap: DEFAULT_WIDTH_CAP,
            byte_budget: DEFAULT_BYTE_BUDGET,
            workers: 0,
            seed_sweep: None,
        })
    }

    pub fn root(mut self, root: usize) -> Self {
        self.root = Some(root);
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn width_cap(mut self, cap: usize) -> Self {
        self.width_cap = cap;
        self
    }

    pub fn seed_sweep(mut self, direction: SweepDirection) -> Self {
        self.seed_sweep = Some(direction);
        self
    }

    fn solver(&self) -> ExactSolver {
        ExactSolver { width_cap: self.width_cap, byte_budget: self.byte_budget }
    }
}

/// What happened for one residue class `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabRecord {
    pub j: usize,
    pub edges_removed: usize,
    pub components: usize,
    pub max_width: usize,
    pub solve_ms: f64,
    /// Objective of the stitched assignment on the full instance.
    pub h_j: Score,
    /// Objective restricted to the kept edges.
    pub slab_value: Score,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtasDiagnostics {
    pub k: usize,
    pub root: usize,
    pub slabs: Vec<SlabRecord>,
    pub chosen_j: usize,
    pub total_ms: f64,
}

impl PtasDiagnostics {
    pub fn max_width(&self) -> usize {
        self.slabs.iter().map(|s| s.max_width).max().unwrap_or(0)
    }

    /// One row per `j`: `j,edges_removed,components,max_width,solve_ms,h_j`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,edges_removed,components,max_width,solve_ms,h_j\n");
        for s in &self.slabs {
            let _ = writeln!(out, "{},{},{},{},{:.3},{}", s.j, s.edges_removed, s.components, s.max_width, s.solve_ms, s.h_j);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PtasSolution {
    pub assignment: Assignment,
    pub score: Score,
    pub diagnostics: PtasDiagnostics,
}

pub fn solve_ptas(instance: &MrfInstance, config: &PtasConfig) -> Result<PtasSolution> {
    with_workers(config.workers, || run(instance, config))?
}

fn run(instance: &MrfInstance, config: &PtasConfig) -> Result<PtasSolution> {
    let started = Instant::now();
    let violations = instance.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations));
    }
    if config.k == 0 {
        return Err(Error::InvalidSpec("k must be at least 1".into()));
    }
    if let Some(what) = first_negative(instance) {
        return Err(Error::NegativeInstance { what });
    }
    let levels = bfs_levels(instance.graph(), config.root.unwrap_or(0))?;

    let slabs: Vec<(Vec<usize>, SlabRecord)> = (0..config.k)
        .into_par_iter()
        .map(|j| solve_slab(instance, &levels, config, j))
        .collect::<Result<_>>()?;

    let mut chosen = 0;
    for (j, (_, rec)) in slabs.iter().enumerate() {
        if rec.h_j > slabs[chosen].1.h_j {
            chosen = j;
        }
    }
    let (mut labels, records): (Vec<_>, Vec<_>) = slabs.into_iter().unzip();
    let assignment = Assignment::new(labels.swap_remove(chosen));
    let score = records[chosen].h_j;
    Ok(PtasSolution {
        assignment,
        score,
        diagnostics: PtasDiagnostics {
            k: config.k,
            root: levels.root,
            slabs: records,
            chosen_j: chosen,
            total_ms: started.elapsed().as_secs_f64() * 1e3,
        },
    })
}

fn first_negative(instance: &MrfInstance) -> Option<String> {
    let g = instance.graph();
    if let Some(v) = (0..g.num_vertices()).find(|&v| instance.phi_row(v).iter().any(|&x| x < 0.0)) {
        return Some(format!("phi of vertex {v}"));
    }
    (0..g.num_edges())
        .find(|&e| instance.psi_table(e).iter().any(|&x| x < 0.0))
        .map(|e| format!("psi of edge {e}"))
}

struct ComponentResult {
    labels: Vec<usize>,
    width: usize,
    value: Score,
}

fn solve_slab(instance: &MrfInstance, levels: &LevelMap, config: &PtasConfig, j: usize) -> Result<(Vec<usize>, SlabRecord)> {
    let started = Instant::now();
    let graph = instance.graph();
    let sub = delete_level_classes(graph, levels, config.k, j)?;
    let components = connected_components(&sub);

    let mut labels = vec![usize::MAX; graph.num_vertices()];
    let mut max_width = 0;
    let mut slab_value = 0.0;
    let mut absorb = |comp: &Component, r: ComponentResult, labels: &mut Vec<usize>| {
        for (&v, &a) in comp.vertices.iter().zip(&r.labels) {
            labels[v] = a;
        }
        max_width = max_width.max(r.width);
        slab_value += r.value;
    };

    match config.seed_sweep {
        None => {
            let solved: Vec<ComponentResult> = components
                .par_iter()
                .map(|c| solve_component(instance, c, config, None))
                .collect::<Result<_>>()?;
            for (c, r) in components.iter().zip(solved) {
                absorb(c, r, &mut labels);
            }
        }
        Some(direction) => {
            let order = sweep_order(graph, &components, direction);
            let mut partial: Vec<Option<usize>> = vec![None; graph.num_vertices()];
            for position in 0..order.len() {
                let comp = &components[order[position]];
                let hint = boundary_seed(graph, &sub.kept, &components, &order, position, &partial)?;
                let r = solve_component(instance, comp, config, Some(&hint))?;
                for (&v, &a) in comp.vertices.iter().zip(&r.labels) {
                    partial[v] = Some(a);
                }
                absorb(comp, r, &mut labels);
            }
        }
    }

    if labels.contains(&usize::MAX) {
        return Err(Error::Internal(format!("slab {j} left a vertex unlabeled")));
    }
    let h_j = evaluate_unchecked(instance, &labels);
    let record = SlabRecord {
        j,
        edges_removed: sub.removed_count(),
        components: components.len(),
        max_width,
        solve_ms: started.elapsed().as_secs_f64() * 1e3,
        h_j,
        slab_value,
    };
    Ok((labels, record))
}

/// Decomposition used for one component: the grid-band sweep when the
/// graph has grid coordinates and the sweep stays within its width bound,
/// the elimination-ordering heuristic otherwise.
pub fn decompose_component(local: &crate::graph::Graph, k: usize) -> Result<BranchDecomposition> {
    if local.coords().is_some() {
        match build_grid_band(local, k) {
            Ok(d) => return Ok(d),
            Err(Error::BuildFailure { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    build_heuristic(local)
}

/// With a hint, each deleted edge into a solved component contributes
/// `psi_e(solved label, x_v)` to its boundary vertex, so the component is
/// solved exactly given its neighbours. The reported value leaves those
/// cross terms out.
fn solve_component(
    instance: &MrfInstance,
    comp: &Component,
    config: &PtasConfig,
    hint: Option<&SeedHint>,
) -> Result<ComponentResult> {
    let original = instance.restrict(comp);
    let mut local = original.clone();
    for pin in hint.map_or(&[][..], |h| &h.pins[..]) {
        let i = comp
            .vertices
            .binary_search(&pin.vertex)
            .map_err(|_| Error::Internal(format!("seed vertex {} is outside its component", pin.vertex)))?;
        let (u, _) = instance.graph().edge(pin.edge);
        for (a, slot) in local.phi_mut(i).iter_mut().enumerate() {
            *slot += if u == pin.vertex { instance.psi(pin.edge, a, pin.label) } else { instance.psi(pin.edge, pin.label, a) };
        }
    }
    let (labels, width) = if comp.edges.is_empty() {
        (vec![best_vertex_label(&local, 0, None)], 0)
    } else {
        let decomp = decompose_component(local.graph(), config.k)?;
        let solution = config.solver().solve(&local, &decomp)?;
        (solution.assignment.into_inner(), solution.width)
    };
    let value = evaluate_unchecked(&original, &labels);
    Ok(ComponentResult { labels, width, value })
}
