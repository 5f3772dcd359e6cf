use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input, out-of-range vertex, missing arc and similar caller errors.
    #[error("input error: {0}")]
    Input(String),
    /// The instance exceeds a search or enumeration limit.
    #[error("capacity error: {what} has size {size}, limit is {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    /// A contraction was requested whose precondition does not hold.
    #[error("contract error: {0}")]
    Contract(String),
    /// A Schur complement was requested on a singular principal block.
    #[error("singular pivot block")]
    SingularPivot,
    /// A matrix reduction was requested whose precondition does not hold.
    #[error("reduce error: {0}")]
    Reduce(String),
    /// A self-check failed. Indicates a bug or a false mathematical claim.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn reduce(msg: impl Into<String>) -> Self {
        Error::Reduce(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
