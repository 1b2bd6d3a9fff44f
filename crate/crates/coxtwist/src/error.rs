//! Error type shared across the crate.
//!
//! Every fallible operation returns [`Result`]. The four variants map onto
//! the four failure classes the command-line tool distinguishes with exit
//! codes: malformed input, a guarded computation that would exceed its size
//! limit, a well-formed input outside an operation's domain, and an internal
//! cross-check that failed (which always indicates a bug, never user error).

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// The input file or diagram description is malformed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An exhaustive enumeration would exceed its configured guard.
    #[error("capacity exceeded in {what}: {actual} > limit {limit}")]
    Capacity {
        /// Which enumeration hit the guard.
        what: &'static str,
        /// The configured limit.
        limit: usize,
        /// The size the input would have required.
        actual: usize,
    },

    /// The input is well-formed but outside the operation's domain
    /// (e.g. a family that is not a separation where one is required).
    #[error("domain error: {0}")]
    Domain(String),

    /// An internal invariant cross-check failed; this is a bug.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 1,
            Error::Parse(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Invariant(_) => 4,
        }
    }
}
