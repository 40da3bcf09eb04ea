//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration cap exceeded: {states} states > cap {cap}")]
    CapExceeded { states: u128, cap: u64 },

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Independent solver starts of a convex problem disagree; this flags an
    /// implementation bug rather than a property of the problem.
    #[error("solver starts disagree: spread {spread:.3e} exceeds {limit:.3e}")]
    SolverDisagreement { spread: f64, limit: f64 },

    #[error("scheme construction: {0}")]
    SchemeBuild(String),

    #[error("exact evaluation unavailable: {0}")]
    ExactUnavailable(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
