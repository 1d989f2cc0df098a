use thiserror::Error;

/// Errors raised by metric evaluation, ball tracing and the experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point:?} is not in the domain {domain}")]
    NotInDomain { domain: String, point: Vec<f64> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point coincides with the inversion center; its image is at infinity")]
    Pole,
    #[error("a = 0: the canonical Möbius map is the identity")]
    IdentityCase,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Coarse classification, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Precondition,
    Capability,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Unsupported(_) => ErrorClass::Capability,
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
