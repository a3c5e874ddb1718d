use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid index (e.g. zero index in a 1-based convention).
    #[error("index error: {0}")]
    Index(String),

    /// An iterative method failed to converge. Carries the last iterate
    /// and residual so callers can diagnose.
    #[error("{context}: no convergence after {iterations} iterations (last={last}, residual={residual:e})")]
    NoConvergence {
        context: String,
        iterations: usize,
        last: f64,
        residual: f64,
    },

    /// A numerical invariant failed (bad zero, singular normalization, ...).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Grid too coarse for the requested frequency window.
    #[error("grid too coarse: lambda*h = {lambda_h:.3e} exceeds {max_allowed}")]
    Resolution { lambda_h: f64, max_allowed: f64 },

    /// Not enough samples for a statistical operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Operation not defined for this spectrum source.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed run configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
