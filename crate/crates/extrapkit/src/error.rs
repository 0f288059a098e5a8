use thiserror::Error;

/// Errors produced by constructors and evaluators.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data (bad pieces, non-finite entries, broken invariants).
    #[error("validation error: {0}")]
    Validation(String),
    /// An evaluation point outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An inadmissible parameter value (e.g. `p < 1`, `base <= 1`).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Discretization too coarse for the requested certified bound.
    #[error("refinement error: {0}")]
    Refinement(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
