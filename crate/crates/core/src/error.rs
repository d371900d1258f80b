use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("alphabet mismatch: {0}")]
    Alphabet(String),
    #[error("{0}")]
    Invalid(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn pre<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
