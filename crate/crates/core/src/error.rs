use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for this ensemble kind.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The parameterization admits no integer matrix dimensions to sample from.
    #[error("sampling unsupported: {0}")]
    UnsupportedSampling(String),

    /// An iterative evaluation ran out of iterations.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A computed quantity violated an identity that holds by construction.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
