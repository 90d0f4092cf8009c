use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} outside supported range 2..=8")]
    DimensionOutOfRange(usize),

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("operation not supported for {0} bodies")]
    UnsupportedFamily(&'static str),

    #[error("matrix is not unimodular (determinant {0})")]
    NonUnimodular(String),

    #[error("enumeration of {requested} grid points exceeds budget of {cap}")]
    EnumerationBudgetExceeded { requested: u128, cap: u64 },

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),

    #[error("minima profile is empty or incomplete")]
    MinimaNotComputed,

    #[error("largest successive minimum {0} exceeds 1")]
    LambdaExceedsOne(String),

    #[error("no lift j*v + p*w inside the body for v = {v:?}, p = {p}")]
    NoLiftFound { v: Vec<i64>, p: u64 },

    #[error("no admissible prime: the lifting bound is {0}")]
    NoAdmissiblePrime(String),

    #[error("invalid certificate: {0}")]
    CertificateInvalid(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid nu sequence: {0}")]
    InvalidNu(String),

    #[error("threshold chain violated: {0}")]
    ThresholdViolated(String),

    #[error("coverage verification failed: lattice point {0:?} lies on no hyperplane")]
    CoverageVerificationFailed(Vec<i64>),

    #[error("instance too large: {what} = {size} exceeds cap {cap}")]
    InstanceTooLarge { what: &'static str, size: usize, cap: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    /// Errors that indicate a construction produced an inconsistent result,
    /// as opposed to bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::CoverageVerificationFailed(_)
                | Error::ThresholdViolated(_)
                | Error::NoLiftFound { .. }
                | Error::CertificateInvalid(_)
        )
    }
}
