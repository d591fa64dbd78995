use thiserror::Error;

/// Errors produced by operator algebra, state construction, and the CLI layer.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or register dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An argument lies outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A constructed value failed one of its invariants.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
