use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    /// A configured search or enumeration bound would be exceeded.
    #[error("{what} exceeds cap ({needed} > {limit})")]
    CapExceeded {
        what: &'static str,
        limit: u128,
        needed: u128,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An internal consistency assertion failed. Always a bug or a
    /// counterexample to a theorem being checked.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    pub(crate) fn cap(what: &'static str, limit: impl Into<u128>, needed: impl Into<u128>) -> Self {
        Error::CapExceeded {
            what,
            limit: limit.into(),
            needed: needed.into(),
        }
    }
}
