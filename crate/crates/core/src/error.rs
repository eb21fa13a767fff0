use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid input: {0}")]
    Domain(String),

    /// A partition with more blocks than the base dimension was used as a
    /// basis index.
    #[error("partition {partition} has {blocks} blocks but n = {n}")]
    BasisIndex {
        partition: String,
        blocks: usize,
        n: usize,
    },

    /// A dense tensor would exceed the configured entry bound.
    #[error("capacity exceeded: n = {n}, order = {order} needs {entries} entries (limit {limit})")]
    Capacity {
        n: usize,
        order: usize,
        entries: u128,
        limit: u64,
    },

    /// Checked integer arithmetic overflowed.
    #[error("arithmetic overflow")]
    Overflow,

    /// Malformed serialized data.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
