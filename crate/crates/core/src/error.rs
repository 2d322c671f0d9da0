use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("not positive: {0}")]
    NotPositive(String),
    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("algebra mismatch: {0}")]
    Mismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The vector lies outside the domain of the operation, e.g. it is not
    /// left bounded for the chosen functional.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical tolerance exceeded: {0}")]
    Tolerance(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
