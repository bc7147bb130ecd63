use thiserror::Error;

/// Errors raised by the aggregation, minimisation, verification and image
/// routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input vector is empty")]
    EmptyInput,

    #[error("input contains a non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("value {value} at position {index} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("negative input {value} at position {index}; this mean is defined on [0, inf)^n")]
    NegativeInput { index: usize, value: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("at least {min} values are required, got {got}")]
    TooFewValues { min: usize, got: usize },

    #[error("generator has no inverse")]
    MissingInverse,

    #[error("generator is not declared strictly monotone")]
    NotMonotone,

    #[error("generator inverse does not round-trip at t = {t} (got {got})")]
    NonInvertible { t: f64, got: f64 },

    #[error("total weight is zero")]
    ZeroTotalWeight,

    #[error("penalty evaluated to a non-finite value at y = {y}")]
    NonFinitePenalty { y: f64 },

    #[error("minimisation bracket is empty")]
    EmptyBracket,

    #[error("penalty is not quasi-convex in y near y = {y}")]
    NotQuasiConvex { y: f64 },

    #[error("penalty axiom violated: {0}")]
    PenaltyAxiom(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("Lehmer bound is undefined for q = {q} in (0, 1): the Lehmer mean is not weakly monotone there")]
    LehmerBoundExcluded { q: f64 },

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("the dual is only defined on [0, 1], got [{lo}, {hi}]")]
    DualDomain { lo: f64, hi: f64 },

    #[error("malformed PGM: {0}")]
    Pgm(String),

    #[error("image has zero size")]
    EmptyImage,

    #[error("failed to parse report: {0}")]
    ReportParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
