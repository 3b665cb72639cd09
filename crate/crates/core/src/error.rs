use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("insertion position {k} out of range 1..={max}")]
    PositionOutOfRange { k: usize, max: usize },

    #[error("variable index {index} out of range 1..={n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("multi-index {alpha:?} has degree {got}, expected {expected}")]
    DegreeMismatch { alpha: Vec<u32>, expected: u32, got: u32 },

    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: u32, got: u32 },

    #[error("brute force refused: {what} exceeds cap ({value} > {cap})")]
    SizeCap { what: &'static str, value: u64, cap: u64 },

    #[error("grid of {points} evaluations exceeds the cost cap of {cap}")]
    CostCap { points: u128, cap: u64 },

    #[error("grid too coarse for certification: correction {correction} must be below 1")]
    GridTooCoarse { correction: f64 },

    #[error("ensemble support is empty")]
    EmptySupport,

    #[error("support violation: {alpha:?} uses {vars} variables, limit is {limit}")]
    SupportViolation { alpha: Vec<u32>, vars: usize, limit: usize },

    #[error("array over M(m,N) has {got} entries, expected {expected}")]
    IncompleteArray { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed polynomial document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
