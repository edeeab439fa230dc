use thiserror::Error;

/// Errors raised by the core computations.
///
/// `Precondition` covers inputs that violate an operation's contract;
/// `Certification` means an internal exactness check did not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("direction mismatch: cannot combine a {0} series with a {1} series")]
    DirectionMismatch(&'static str, &'static str),
    #[error("weight {weight} lies beyond the truncation order {order}")]
    BeyondTruncation { weight: i64, order: i64 },
    #[error("stability not reached for levels up to {j_max}")]
    StabilityNotReached { j_max: u32 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn cert(msg: impl Into<String>) -> Self {
        Error::Certification(msg.into())
    }

    /// True when the error reflects a failed internal certificate rather than bad input.
    pub fn is_certification_failure(&self) -> bool {
        matches!(
            self,
            Error::Certification(_) | Error::StabilityNotReached { .. } | Error::Overflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
