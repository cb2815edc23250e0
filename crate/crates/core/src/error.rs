use thiserror::Error;

/// Errors raised by the distribution, sampling and paired-comparison routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The argument is inside the domain, but the closed-form law used is
    /// not exact there.
    #[error("outside exact-validity range: {0}")]
    Validity(String),

    /// The critical-radius objective is undefined at rotations.
    #[error("excluded point: {0}")]
    ExcludedPoint(String),

    /// A numerical routine failed to meet its internal consistency checks.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The requested singular plane is not uniquely determined.
    #[error("degenerate singular pair: {0}")]
    Multiplicity(String),

    /// Input data violates a structural requirement.
    #[error("invalid data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
