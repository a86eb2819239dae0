use thiserror::Error;

/// Errors raised by the algebra, place-function and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element `{elem}` does not belong to algebra `{algebra}`")]
    AlgebraMismatch { algebra: String, elem: String },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("supremum of an empty family requested")]
    EmptyFamily,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not a Boolean homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
