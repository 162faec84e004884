use thiserror::Error;

/// Errors raised by state construction, classification and census routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong lengths, bad encodings, indices out of range.
    #[error("structural error: {0}")]
    Structural(String),
    /// Well-formed input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a configured size cap.
    #[error("resource limit: {what} (requested {requested}, cap {cap})")]
    ResourceLimit {
        what: String,
        requested: u64,
        cap: u64,
    },
    /// An internal consistency check failed.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
