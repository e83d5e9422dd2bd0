use thiserror::Error;

/// Errors raised by the library. Every variant maps to "invalid input" at the CLI
/// except [`Error::BudgetExceeded`], which is a verification failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("node ({0},{1}) lies outside the diagram")]
    NodeOutside(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("rewrite budget of {0} steps exceeded")]
    BudgetExceeded(u64),
    #[error("straightening failed: {0}")]
    Straightening(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Whether the error means a computation ran out of resources rather than
    /// that the input was malformed.
    pub fn is_verification_failure(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_) | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
