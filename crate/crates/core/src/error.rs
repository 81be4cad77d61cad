use std::io;

use thiserror::Error;

/// Errors raised by the counting library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A caller broke an operation's precondition (bad vertex id, `i == j`, missing labels, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An exactness check inside a counting pipeline failed. This means an accumulation bug,
    /// never bad input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(message: impl Into<String>) -> Result<T> {
    Err(Error::Contract(message.into()))
}
