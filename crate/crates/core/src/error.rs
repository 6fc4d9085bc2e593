use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(usize),

    #[error("step {0} is not supported (expected {1})")]
    UnsupportedStep(usize, &'static str),

    #[error("generator index {index} is outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("bracket word of length {len} exceeds the step {step}")]
    WordTooLong { len: usize, step: usize },

    #[error("basis index {0} does not belong to this algebra")]
    UnknownBasisWord(usize),

    #[error("operands belong to different algebras ({0} vs {1})")]
    RingMismatch(String, String),

    #[error("point has no coordinate for variable {0}")]
    MissingCoordinate(usize),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("{0}")]
    Precondition(String),

    #[error("inconsistent stratum: {0}")]
    InconsistentStratum(String),

    #[error("witness point is not generic on the stratum: {0}")]
    NonGenericWitness(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("integration produced a non-finite state after index {last_valid}")]
    NonFinite { last_valid: usize },

    #[error("control matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
