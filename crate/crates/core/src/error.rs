use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("constraint set has no pieces")]
    EmptyConstraintSet,

    #[error("polytope is empty")]
    Infeasible,

    /// An empty feasible slice or correspondence value where the instance
    /// promised non-emptiness.
    #[error("promise violation: {0}")]
    PromiseViolation(String),

    #[error("operation requires a jointly-convex instance")]
    WrongConstraintKind,

    #[error("no convergence after {iterations} iterations (last change {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("scan budget exceeded: {required} simplices > {budget}")]
    BudgetExceeded { required: f64, budget: f64 },

    #[error("convexity probe failed: {0}")]
    NotConvex(String),

    #[error("infeasible probe point: constraint value {value:e} exceeds {bound:e}")]
    InfeasibleProbe { value: f64, bound: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed document: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
