use thiserror::Error;

/// Errors shared across the crate.
///
/// Search exhaustion is not an error: solvers report it through
/// [`crate::Verdict::Indeterminate`]. Refusals that carry a witness are values
/// too. What remains here is malformed input and capacity limits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("infeasible family parameters: {0}")]
    Infeasible(String),

    #[error("capacity exceeded: {what} (limit {limit}, got {got})")]
    Capacity {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
