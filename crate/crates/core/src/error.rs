use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// The CLI maps each variant onto an exit status through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not a prime below 2^63")]
    NotPrime(u64),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("point lies in the base locus of the map")]
    BaseLocus,
    #[error("composition is identically zero")]
    IdenticallyZero,
    #[error("no nonzero entry available: {0}")]
    AllZero(String),
    #[error("points coincide projectively")]
    CoincidentPoints,
    #[error("resampling cap of {0} exceeded")]
    ResampleCapExceeded(usize),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("no bi-monoid hypersurface of degree {k} through the samples")]
    NoSolution { k: u32 },
    #[error("every candidate of degree {k} failed its witnesses after {attempts} attempts")]
    WitnessFailure { k: u32, attempts: usize },
    #[error("no admissible hypersurface found up to degree k_max = {k_max}")]
    KMaxExceeded { k_max: u32 },
    #[error("degenerate surface: {0}")]
    DegenerateSurface(String),
    #[error("round trip failed at point {0}")]
    RoundTripFailure(String),
    #[error("step {step} failed verification: {detail}")]
    StepVerificationFailure { step: usize, detail: String },
    #[error("step {step}: gave up after {attempts} choices of q2; last error: {last}")]
    RetriesExhausted { step: usize, attempts: usize, last: String },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(
        "hypothesis violated: n = {n} < r + 2 = {}; Cremona equivalence is only guaranteed for n >= r + 2",
        r + 2
    )]
    HypothesisViolation { r: usize, n: usize },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidInput(_) | Error::NotPrime(_) | Error::Io(_) => 2,
            Error::HypothesisViolation { .. } => 3,
            Error::RoundTripFailure(_)
            | Error::StepVerificationFailure { .. }
            | Error::VerificationFailed(_)
            | Error::DegenerateSurface(_) => 4,
            Error::ResampleCapExceeded(_)
            | Error::RetriesExhausted { .. }
            | Error::WitnessFailure { .. }
            | Error::KMaxExceeded { .. }
            | Error::NoSolution { .. } => 5,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
