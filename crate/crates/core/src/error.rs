use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An arc handed to `contract` is not butterfly-contractible.
    #[error("arc ({0}, {1}) is not butterfly-contractible")]
    NotContractible(usize, usize),

    /// A construction produced an object that fails its own invariants.
    /// Every occurrence is a bug.
    #[error("internal consistency violation: {0}")]
    Internal(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    /// Exact solvers use 64-bit vertex masks.
    #[error("digraph has {n} vertices; this operation supports at most {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}
