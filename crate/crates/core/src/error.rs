use thiserror::Error;

/// Errors reported by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} needs {requested} bytes, budget is {budget} bytes")]
    Capacity {
        what: String,
        requested: u64,
        budget: u64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("exhaustive search budget exceeded: {0}")]
    SearchBudget(String),

    #[error("operator is not self-orthogonal: {0}")]
    NotSelfOrthogonal(String),

    #[error("graph is not regular: {0}")]
    NotRegular(String),

    #[error("symbol integrity error: {0}")]
    Integrity(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by memory or size limits rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::SearchBudget(_))
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
