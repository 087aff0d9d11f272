use thiserror::Error;

use crate::mvee::EllipsoidResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("every input row is numerically zero")]
    AllZero,

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("selection matrix is singular or its inverse is invalid")]
    SingularState,

    #[error("index {index} is not in the selection")]
    NotInSet { index: usize },

    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("swap would make the selection singular (gain {gain:e})")]
    DegenerateSwap { gain: f64 },

    #[error("greedy initialization found {found} independent points, needed {needed}")]
    RankDeficient { found: usize, needed: usize },

    #[error("local search exceeded its iteration cap of {cap}")]
    IterationCapExceeded { cap: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("subset does not span the working space")]
    SubsetRankDeficient,

    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),

    #[error("MVEE solver hit {iterations} iterations without certifying")]
    MaxIterExceeded {
        iterations: usize,
        best: Box<EllipsoidResult>,
    },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("enumeration of {count} subsets exceeds the limit")]
    TooLarge { count: u128 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("ragged rows at line {line}: expected {expected} columns, found {found}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
