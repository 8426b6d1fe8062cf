use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Position of a syntax error inside a spec file or literal, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("syntax error at {location}: {message}")]
    Syntax { location: Location, message: String },

    /// A search ran out of nodes. `progress` is the number of results
    /// produced before the budget was hit (0 when the query has no partial
    /// output).
    #[error("budget of {limit} search nodes exceeded ({progress} partial results)")]
    BudgetExceeded { limit: u64, progress: usize },

    /// A truncated family is too shallow for the requested construction.
    #[error("truncation exceeded: {message} (achieved length {achieved})")]
    Truncation { message: String, achieved: usize },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("{0} is not in the group generated by the odd-prime reciprocals")]
    NotInGroup(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            location: Location { line, column },
            message: msg.into(),
        }
    }

    /// Re-tag a budget error with the number of results found so far.
    pub fn with_progress(self, found: usize) -> Self {
        match self {
            Error::BudgetExceeded { limit, .. } => Error::BudgetExceeded {
                limit,
                progress: found,
            },
            other => other,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
