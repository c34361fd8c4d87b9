use alloc::string::String;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Input violates a structural invariant (e.g. a face listed after its coface).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    /// A computed quantity left its mathematically guaranteed range by more than rounding.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
