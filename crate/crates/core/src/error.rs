use thiserror::Error;

/// Failure classes shared by every computation in the crate.
///
/// The variants are coarse on purpose: the command-line front end maps each
/// one to a distinct exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or mismatched arguments (wrong arity, zero vector, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// Well-formed input outside the supported class of problems.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// A computed value violated an invariant that must hold.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    /// The request exceeds a resource guard.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Unsupported(msg.into()))
}
