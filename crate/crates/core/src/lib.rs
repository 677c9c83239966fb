//! MAP inference for pairwise Markov random fields on planar graphs.
//!
//! An instance scores a labeling `x` as
//! `H(x) = sum_v phi_v(x_v) + sum_{uv} psi_uv(x_u, x_v)`. The crate
//! provides an exact dynamic program over branch decompositions, a
//! Baker-style approximation scheme for nonnegative instances that returns
//! `H >= (1 - eps) * OPT`, reductions from correlation clustering, and a
//! small stereo-matching pipeline built on top.

pub mod decomp;
pub mod error;
pub mod graph;
pub mod mrf;
pub mod ptas;
pub mod reductions;
pub mod solver;
pub mod sweep;
pub mod vision;

pub use decomp::{build_grid_band, build_heuristic, BranchDecomposition, RootedDecomposition};
pub use error::{Error, Result, Violation};
pub use graph::{grid_graph, Graph, GridPos};
pub use mrf::{
    brute_force_solve, evaluate, shift_nonnegative, Assignment, AssignmentFile, ModelFile, MrfInstance, Score,
};
pub use ptas::{choose_k, solve_ptas, PtasConfig, PtasDiagnostics, PtasSolution};
pub use solver::{solve_exact, ExactSolution, ExactSolver};
