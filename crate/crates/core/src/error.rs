use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The Gaussian integrand is not in L^1: the real part of the quadratic
    /// form is not positive definite.
    #[error("integral does not converge: {0}")]
    NotIntegrable(String),

    #[error("quadrature grid too coarse: doubling radial nodes moved the result by {change:e} (tolerance {tol:e})")]
    GridTooCoarse { change: f64, tol: f64 },

    #[error("operation requires a nonzero function")]
    ZeroFunction,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("search failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
