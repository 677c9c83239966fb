//! Pairwise MRF instances, the objective, the nonnegativity shift and the
//! exhaustive oracle.
//!
//! Labels are held as 0-based indices in memory (`0..num_labels`). Every
//! external format (JSON, CLI output, disparity maps) uses 1-based labels.

mod format;
mod generate;

pub use format::{AssignmentFile, ModelFile};
pub use generate::{random_instance, GridInstanceSpec};

use crate::error::{Error, Result, Violation};
use crate::graph::{Component, Graph};

pub type Score = f64;

/// Default cap on the number of assignments [`brute_force_solve`] may enumerate.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct MrfInstance {
    graph: Graph,
    num_labels: usize,
    phi: Vec<Vec<f64>>,
    psi: Vec<Vec<f64>>,
}

impl MrfInstance {
    /// Assembles an instance without checking table shapes; see
    /// [`MrfInstance::validate`] and [`MrfInstance::checked`].
    ///
    /// `phi[v]` holds `num_labels` scores; `psi[e]` is a row-major
    /// `num_labels x num_labels` table indexed by (first, second) endpoint.
    pub fn new(graph: Graph, num_labels: usize, phi: Vec<Vec<f64>>, psi: Vec<Vec<f64>>) -> Self {
        MrfInstance { graph, num_labels, phi, psi }
    }

    pub fn checked(graph: Graph, num_labels: usize, phi: Vec<Vec<f64>>, psi: Vec<Vec<f64>>) -> Result<Self> {
        let inst = Self::new(graph, num_labels, phi, psi);
        let v = inst.validate();
        if v.is_empty() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(v))
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    #[inline]
    pub fn phi(&self, v: usize, label: usize) -> f64 {
        self.phi[v][label]
    }

    #[inline]
    pub fn psi(&self, e: usize, first: usize, second: usize) -> f64 {
        self.psi[e][first * self.num_labels + second]
    }

    pub fn phi_row(&self, v: usize) -> &[f64] {
        &self.phi[v]
    }

    pub fn psi_table(&self, e: usize) -> &[f64] {
        &self.psi[e]
    }

    /// True iff every phi and psi entry is `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.phi.iter().chain(&self.psi).flatten().all(|&x| x >= 0.0)
    }

    /// Table-shape, finiteness and graph checks. Empty means well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let l = self.num_labels;
        if l == 0 {
            out.push(Violation::Shape { what: "num_labels must be at least 1".into() });
        }
        out.extend(self.graph.validate());
        if self.phi.len() != self.graph.num_vertices() {
            out.push(Violation::Shape {
                what: format!("{} phi rows for {} vertices", self.phi.len(), self.graph.num_vertices()),
            });
        }
        for (v, row) in self.phi.iter().enumerate() {
            if row.len() != l {
                out.push(Violation::Shape { what: format!("phi row of vertex {v} has {} entries, expected {l}", row.len()) });
            } else if row.iter().any(|x| !x.is_finite()) {
                out.push(Violation::NonFinite { what: format!("phi row of vertex {v}") });
            }
        }
        if self.psi.len() != self.graph.num_edges() {
            out.push(Violation::Shape {
                what: format!("{} psi tables for {} edges", self.psi.len(), self.graph.num_edges()),
            });
        }
        for (e, table) in self.psi.iter().enumerate() {
            if table.len() != l * l {
                out.push(Violation::Shape {
                    what: format!("psi table of edge {e} has {} entries, expected {}", table.len(), l * l),
                });
            } else if table.iter().any(|x| !x.is_finite()) {
                out.push(Violation::NonFinite { what: format!("psi table of edge {e}") });
            }
        }
        out
    }

    pub fn check_assignment(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.num_vertices() {
            return Err(Error::InvalidAssignment(format!(
                "{} labels for {} vertices",
                x.len(),
                self.num_vertices()
            )));
        }
        if let Some((v, &a)) = x.labels().iter().enumerate().find(|(_, &a)| a >= self.num_labels) {
            return Err(Error::InvalidAssignment(format!(
                "vertex {v} has label {} outside 1..={}",
                a + 1,
                self.num_labels
            )));
        }
        Ok(())
    }

    /// Copies the sub-instance on a component, with local ids as in
    /// [`Graph::extract`].
    pub fn restrict(&self, component: &Component) -> MrfInstance {
        MrfInstance {
            graph: self.graph.extract(component),
            num_labels: self.num_labels,
            phi: component.vertices.iter().map(|&v| self.phi[v].clone()).collect(),
            psi: component.edges.iter().map(|&e| self.psi[e].clone()).collect(),
        }
    }

    pub(crate) fn phi_mut(&mut self, v: usize) -> &mut [f64] {
        &mut self.phi[v]
    }
}

/// One 0-based label per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(labels: Vec<usize>) -> Self {
        Assignment(labels)
    }

    /// From 1-based labels; rejects 0.
    pub fn from_one_based(labels: &[usize]) -> Result<Self> {
        labels
            .iter()
            .enumerate()
            .map(|(v, &a)| {
                a.checked_sub(1)
                    .ok_or_else(|| Error::InvalidAssignment(format!("vertex {v} has label 0; labels start at 1")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|a| a + 1).collect()
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl std::ops::Index<usize> for Assignment {
    type Output = usize;
    fn index(&self, v: usize) -> &usize {
        &self.0[v]
    }
}

/// The objective: sum of phi over vertices (by id) then psi over edges (by id).
pub fn evaluate(instance: &MrfInstance, x: &Assignment) -> Result<Score> {
    instance.check_assignment(x)?;
    Ok(evaluate_unchecked(instance, x.labels()))
}

pub(crate) fn evaluate_unchecked(instance: &MrfInstance, x: &[usize]) -> Score {
    let mut total = 0.0;
    for (v, &a) in x.iter().enumerate() {
        total += instance.phi(v, a);
    }
    for (e, &(u, v)) in instance.graph().edges().iter().enumerate() {
        total += instance.psi(e, x[u], x[v]);
    }
    total
}

/// Subtracts each table's minimum so every entry is nonnegative.
///
/// Returns the shifted instance and the total offset, so that
/// `evaluate(shifted, x) == evaluate(original, x) - offset` for every `x`.
/// The set of optimal assignments is unchanged.
pub fn shift_nonnegative(instance: &MrfInstance) -> (MrfInstance, Score) {
    let mut shifted = instance.clone();
    let mut offset = 0.0;
    for row in shifted.phi.iter_mut().chain(shifted.psi.iter_mut()) {
        let min = row.iter().copied().fold(f64::INFINITY, f64::min);
        if min.is_finite() && min != 0.0 {
            row.iter_mut().for_each(|x| *x -= min);
        }
        if min.is_finite() {
            offset += min;
        }
    }
    (shifted, offset)
}

/// Exhaustive search over all `L^n` assignments in lexicographic order
/// (vertex 0 most significant). The first strict maximum wins, so ties go
/// to the lexicographically smallest label vector.
pub fn brute_force_solve(instance: &MrfInstance) -> Result<(Assignment, Score)> {
    brute_force_solve_capped(instance, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_solve_capped(instance: &MrfInstance, cap: u64) -> Result<(Assignment, Score)> {
    let violations = instance.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations));
    }
    let n = instance.num_vertices();
    let l = instance.num_labels();
    let evaluations = (l as f64).powi(n as i32);
    if evaluations > cap as f64 {
        return Err(Error::TooLarge { evaluations, cap });
    }

    // Edges grouped by their later endpoint so a depth-first walk can add
    // each psi term as soon as both endpoints are fixed.
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in instance.graph().edges().iter().enumerate() {
        closing[u.max(v)].push(e);
    }

    let mut search = Exhaustive {
        instance,
        closing: &closing,
        current: vec![0; n],
        best: vec![0; n],
        best_score: f64::NEG_INFINITY,
    };
    search.descend(0, 0.0);
    let best = Assignment(search.best);
    let score = evaluate_unchecked(instance, best.labels());
    Ok((best, score))
}

struct Exhaustive<'a> {
    instance: &'a MrfInstance,
    closing: &'a [Vec<usize>],
    current: Vec<usize>,
    best: Vec<usize>,
    best_score: f64,
}

impl Exhaustive<'_> {
    fn descend(&mut self, v: usize, partial: f64) {
        if v == self.current.len() {
            if partial > self.best_score {
                self.best_score = partial;
                self.best.copy_from_slice(&self.current);
            }
            return;
        }
        let g = self.instance.graph();
        for a in 0..self.instance.num_labels() {
            self.current[v] = a;
            let mut s = partial + self.instance.phi(v, a);
            for &e in &self.closing[v] {
                let (p, q) = g.edge(e);
                s += self.instance.psi(e, self.current[p], self.current[q]);
            }
            self.descend(v + 1, s);
        }
    }
}
