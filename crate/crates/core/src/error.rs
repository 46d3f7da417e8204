use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("factorization {dims:?} does not multiply out to dimension {dim}")]
    BadFactorization { dims: Vec<usize>, dim: usize },

    #[error("non-finite amplitude at index {index}")]
    NonFinite { index: usize },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("basis vectors {first} and {second} are not orthogonal (|<a|b>| = {overlap})")]
    NotOrthogonal {
        first: String,
        second: String,
        overlap: f64,
    },

    #[error("basis vector {label} is not normalized (squared norm {norm_sqr})")]
    BasisNotNormalized { label: String, norm_sqr: f64 },

    #[error("incomplete basis for {observable}: {found} vectors for dimension {dim}")]
    IncompleteBasis {
        observable: String,
        found: usize,
        dim: usize,
    },

    #[error("duplicate outcome label {label} in {observable}")]
    DuplicateLabel { observable: String, label: String },

    #[error("factor slot {slot} out of range for {factors} factors")]
    BadSlot { slot: usize, factors: usize },

    #[error("outcomes {first} and {second} do not commute")]
    NonCommuting { first: String, second: String },

    #[error("unknown outcome {outcome} for {observable}")]
    UnknownOutcome { observable: String, outcome: String },

    #[error("unknown observable {0}")]
    UnknownObservable(String),

    #[error("observable {0} is declared inconsistently across contexts")]
    InconsistentObservable(String),

    #[error("conditioning on impossible event {outcome} (probability {probability})")]
    ImpossibleEvent { outcome: String, probability: f64 },

    #[error("context {0} must contain at least one measurement")]
    EmptyContext(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("certificate replay failed: {0}")]
    InvalidCertificate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
