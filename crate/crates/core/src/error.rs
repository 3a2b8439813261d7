use thiserror::Error;

/// Errors produced by the mappings, the codec and the simulation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value {0} is outside the open unit interval")]
    OutsideUnitInterval(f64),

    #[error("point of norm {norm} is outside the open unit ball")]
    OutsideBall { norm: f64 },

    #[error("matrix of operator norm {norm} is outside the open operator-norm ball")]
    OutsideOperatorBall { norm: f64 },

    #[error("first coordinate {re}+{im}j is not a positive real number")]
    NonCanonical { re: f64, im: f64 },

    #[error("the zero vector has no direction")]
    ZeroVector,

    #[error("degrees of freedom must be a positive even integer, got {0}")]
    OddDegreesOfFreedom(u32),

    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("expected a {expected_rows}x{expected_cols} matrix, got {rows}x{cols}")]
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("index {index} out of range for {bits} bits")]
    IndexOutOfRange { index: usize, bits: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("received block is identically zero")]
    ZeroBlock,

    #[error("codebook: {0}")]
    Codebook(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
