use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text or structure.
    #[error("parse error: {0}")]
    Parse(String),
    /// A mathematical precondition does not hold for the given input.
    #[error("{0}")]
    Math(String),
    /// The input is valid but outside what this implementation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An internal invariant was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn math<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Math(msg.into()))
}
