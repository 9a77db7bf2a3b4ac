use alloc::string::String;

use crate::series::SeriesVerdict;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("expression error at offset {offset}: {message}")]
    Expression { offset: usize, message: String },

    /// The Cameron–Martin norm for the requested direction diverges, so no
    /// density exists. Carries the certificate.
    #[error("cameron-martin norm {0}")]
    CameronMartinDivergent(SeriesVerdict),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
