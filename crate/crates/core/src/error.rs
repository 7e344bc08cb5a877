use thiserror::Error;

/// Errors produced by the exact polyhedral routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("singular matrix")]
    Singular,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("rank deficient: rank(A) = {rank}, expected {expected}")]
    Rank { rank: usize, expected: usize },

    #[error("{what} budget exceeded: need {needed}, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: String,
        budget: u64,
    },

    #[error("polyhedron is infeasible")]
    Infeasible,

    #[error("polyhedron is unbounded in coordinate {0}")]
    Unbounded(usize),

    #[error("empty point set")]
    Empty,

    #[error("instance generation failed after {0} attempts")]
    Generation(u64),

    /// A computation found no object whose existence the structural theory
    /// guarantees. These are never swallowed; callers report them.
    #[error("theorem violation: {0}")]
    Violation(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
