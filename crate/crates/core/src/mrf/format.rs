use serde::{Deserialize, Serialize};

use super::{Assignment, MrfInstance};
use crate::error::{Error, Result};
use crate::graph::{Graph, GridPos};

/// On-disk model: 0-based vertex ids, row-major psi tables.
///
/// `coords` is optional and lists `[row, col]` per vertex for grid inputs,
/// which lets the PTAS use the grid-band decomposition builder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub num_vertices: usize,
    pub num_labels: usize,
    pub edges: Vec<[usize; 2]>,
    pub phi: Vec<Vec<f64>>,
    pub psi: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<[usize; 2]>>,
}

impl ModelFile {
    pub fn from_instance(inst: &MrfInstance) -> Self {
        let g = inst.graph();
        ModelFile {
            num_vertices: g.num_vertices(),
            num_labels: inst.num_labels(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            phi: inst.phi.clone(),
            psi: inst.psi.clone(),
            coords: g.coords().map(|c| c.iter().map(|p| [p.row, p.col]).collect()),
        }
    }

    /// Builds and validates the instance.
    pub fn into_instance(self) -> Result<MrfInstance> {
        let edges = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let mut graph = Graph::new(self.num_vertices, edges)?;
        if let Some(c) = self.coords {
            graph = graph.with_coords(c.into_iter().map(|[row, col]| GridPos { row, col }).collect())?;
        }
        MrfInstance::checked(graph, self.num_labels, self.phi, self.psi)
    }

    pub fn parse(text: &str) -> Result<MrfInstance> {
        serde_json::from_str::<ModelFile>(text)?.into_instance()
    }

    pub fn render(inst: &MrfInstance) -> String {
        serde_json::to_string_pretty(&Self::from_instance(inst)).expect("model serializes")
    }
}

/// `{"labels": [...]}` with 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentFile {
    pub labels: Vec<usize>,
}

impl AssignmentFile {
    pub fn from_assignment(x: &Assignment) -> Self {
        AssignmentFile { labels: x.to_one_based() }
    }

    pub fn to_assignment(&self) -> Result<Assignment> {
        Assignment::from_one_based(&self.labels)
    }

    pub fn parse(text: &str) -> Result<Assignment> {
        serde_json::from_str::<AssignmentFile>(text)
            .map_err(Error::from)
            .and_then(|f| f.to_assignment())
    }
}
