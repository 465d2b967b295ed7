use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("column {column} is all zero")]
    ZeroColumn { column: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    /// OMP picked a column that is (numerically) in the span of the columns
    /// already selected.
    #[error("degenerate selection: column {column} is dependent on the current support")]
    DegenerateSelection { column: usize },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
