use thiserror::Error;

/// Failures surfaced by the census library.
///
/// `Usage` covers caller mistakes (bad bounds, rejected inputs); `Invariant`
/// means a mathematical invariant was observed to fail and the result must not
/// be trusted.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("divisors of zero are undefined")]
    ZeroDivisors,
    #[error("singular curve")]
    SingularCurve,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Whether the error reflects a broken internal invariant rather than bad input.
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
