//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A partition that does not label a nilpotent orbit of the given algebra.
    #[error("invalid orbit label for {algebra}: {reason}")]
    InvalidOrbit { algebra: String, reason: String },

    /// Operation not defined for this family (e.g. partition ops for G2).
    #[error("{operation} is not supported for type {family}")]
    Unsupported {
        family: &'static str,
        operation: &'static str,
    },

    /// Two partitions that were required to have equal size.
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    /// Source orbit does not lie in the closure of the target orbit.
    #[error("orbit {mu} does not lie in the closure of orbit {lambda}")]
    NotInClosure { mu: String, lambda: String },

    /// Requested rank exceeds the configured bound.
    #[error("rank {rank} of type {family} exceeds the configured bound {bound}")]
    RankBound {
        family: &'static str,
        rank: u32,
        bound: u32,
    },

    /// An unparsable orbit/partition/label string.
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    /// Violated internal invariant: a table or solver self-check failed.
    #[error("internal validation failure: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by mathematically invalid user input
    /// (as opposed to usage errors or internal failures).
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidOrbit { .. }
                | Error::Unsupported { .. }
                | Error::SizeMismatch(_)
                | Error::NotInClosure { .. }
                | Error::RankBound { .. }
                | Error::Parse { .. }
        )
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
