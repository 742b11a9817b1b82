use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid structure: {0}")]
    Structure(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{what} of {size} exceeds the configured limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("invariance violation: {0}")]
    NotInvariant(String),

    #[error("construction failed: {0}")]
    Build(String),

    #[error("eigensolver did not converge (residual {residual:.3e})")]
    NoConvergence { residual: f64 },

    #[error("resonant denominator: energies {first} and {second} coincide")]
    Resonance { first: f64, second: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True when the error is a refusal caused by a resource cap rather than bad input.
    pub fn is_resource_refusal(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
