use thiserror::Error;

/// Errors produced by the numerical kernel, the design routines and the
/// simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-side precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The bracket handed to a root finder does not contain a sign change.
    #[error("invalid bracket [{lower}, {upper}]: g(lower) = {g_lower}, g(upper) = {g_upper}")]
    InvalidBracket {
        lower: f64,
        upper: f64,
        g_lower: f64,
        g_upper: f64,
    },

    /// Adaptive refinement ran out of budget.
    #[error("no convergence: estimate {estimate} with error bound {error_bound}")]
    NonConvergence { estimate: f64, error_bound: f64 },

    /// An integral that should be finite diverged.
    #[error("divergent integral: {0}")]
    Divergence(String),

    /// Two independent evaluation routes disagree.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    /// The objective was not unimodal on the diagnostic grid.
    #[error("objective is not unimodal on the diagnostic grid: {grid:?}")]
    NotUnimodal { grid: Vec<(f64, f64)> },

    /// A bound was requested outside the range where it is stated.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// A configuration exceeds a budget or cannot be represented.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A statistical check did not gather enough events to decide.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
