use thiserror::Error;

/// Errors produced by construction, parsing and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-range input to an operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Input that is well formed but too small or degenerate for the operation.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// The operation does not apply to the given kind of value.
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    /// A line-oriented text file could not be parsed.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
