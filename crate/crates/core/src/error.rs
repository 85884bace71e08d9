use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A size parameter exceeded a configured cap.
    #[error("capacity exceeded: {what} = {requested} > limit {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// Checked integer arithmetic overflowed.
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    /// An argument was outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution violated the admissibility constraints.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Malformed textual input (multi-index, polynomial, distribution spec).
    #[error("parse error: {0}")]
    Parse(String),

    /// Malformed experiment configuration.
    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
