use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("malformed interval [{a},{b}] over A_{n}")]
    MalformedInterval { a: usize, b: usize, n: usize },

    #[error("denominator does not split into linear factors: {0}")]
    NonLinearDenominator(String),

    #[error("degenerate fiber: the sum of inverse Euler classes vanishes")]
    DegenerateFiber,

    #[error("grading is not attractive")]
    NotAttractive,

    #[error("cycle detected in the mutation digraph")]
    CycleDetected,

    #[error("not a terminal triple: {0}")]
    InvalidTriple(String),

    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    #[error("congruence system at vertex {vertex} has no solution for class {class}")]
    FormalityViolation { class: usize, vertex: usize },

    #[error("invalid Euler table: {0}")]
    InvalidEulerTable(String),

    #[error("Euler classes must be supplied: {0}")]
    MissingEulerData(String),

    #[error("basis inconsistency: {0}")]
    BasisInconsistency(String),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
