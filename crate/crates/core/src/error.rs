use thiserror::Error;

/// A single problem found while validating an instance, graph or decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A table has the wrong number of entries.
    Shape { what: String },
    /// A table entry is NaN or infinite.
    NonFinite { what: String },
    /// The graph is malformed (self-loop, parallel edge, bad endpoint).
    Graph { what: String },
    /// A branch decomposition does not match its graph.
    Decomposition { what: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Shape { what } => write!(f, "shape: {what}"),
            Violation::NonFinite { what } => write!(f, "non-finite: {what}"),
            Violation::Graph { what } => write!(f, "graph: {what}"),
            Violation::Decomposition { what } => write!(f, "decomposition: {what}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("invalid decomposition: {}", join(.0))]
    InvalidDecomposition(Vec<Violation>),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("instance too large for exhaustive search: {evaluations} evaluations exceed cap {cap}")]
    TooLarge { evaluations: f64, cap: u64 },

    #[error("graph is disconnected: vertex {vertex} is unreachable")]
    Disconnected { vertex: usize },

    #[error("instance has negative scores ({what}); apply shift_nonnegative first, the approximation guarantee requires nonnegative phi and psi")]
    NegativeInstance { what: String },

    #[error("decomposition width {width} exceeds cap {cap}")]
    WidthExceeded { width: usize, cap: usize },

    #[error("DP tables need {bytes} bytes, over the budget of {budget}")]
    MemoryBudget { bytes: u128, budget: u64 },

    #[error("branch decomposition builder reached width {width}, above bound {bound}")]
    BuildFailure { width: usize, bound: usize },

    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),

    #[error("image dimensions differ: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },

    #[error("beta {beta} too small, at least {required} is needed for nonnegative scores")]
    BetaTooSmall { beta: f64, required: f64 },

    #[error("sweep ordering violated: {0}")]
    Ordering(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
