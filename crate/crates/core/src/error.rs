use thiserror::Error;

/// Failures are either problems with the caller's input (domain errors) or
/// violated internal consistency checks, which indicate a bug.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("dimension overflow: {0}")]
    DimensionOverflow(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::Invariant(_))
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
