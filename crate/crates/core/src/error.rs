use thiserror::Error;

/// Errors raised by state construction, symplectic operations and the
/// polarimetry estimators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-physical covariance: {0}")]
    NonPhysical(String),

    /// The intensity-difference linearization has no usable carrier.
    #[error("degenerate linearization: {0}")]
    DegenerateLinearization(String),

    /// Error propagation would divide by a vanishing signal slope.
    #[error("degenerate slope: {0}")]
    DegenerateSlope(String),

    /// Enantiomeric excess of an empty mixture.
    #[error("enantiomeric excess undefined: both concentrations are zero")]
    UndefinedEe,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
