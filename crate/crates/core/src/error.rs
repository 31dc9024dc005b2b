use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("inverse of zero")]
    InverseOfZero,

    #[error("rank-deficient input: {0}")]
    RankDeficient(String),

    #[error("enumeration budget exceeded: needed {needed}, budget {budget} ({what})")]
    BudgetExceeded {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("paper-scale parameter is not materializable at desk scale: {0}")]
    PaperScaleInfeasible(String),

    #[error("parameter gate violated: {0}")]
    GateViolation(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("comparison could not be certified: {0}")]
    Uncertified(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
