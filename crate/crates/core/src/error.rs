use thiserror::Error;

/// Errors produced by the computations in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands are defined over different character tables")]
    TableMismatch,

    #[error("expected a rational value, got {0}")]
    NonRational(String),

    #[error("non-integral value {value} for {context}")]
    NonIntegral { context: String, value: String },

    #[error("not a genuine character: {0}")]
    NotGenuine(String),

    #[error("constant term is not a unit: {0}")]
    NonUnitConstant(String),

    #[error("constant term must vanish: {0}")]
    NonZeroConstant(String),

    #[error("element order {0} is outside 1..=8")]
    OrderOutOfRange(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("unknown conjugacy class `{0}`")]
    UnknownClass(String),

    #[error("inconsistent node action: {0}")]
    InconsistentNodeAction(String),

    #[error("no non-negative integer solution: {0}")]
    Infeasible(String),

    #[error("system is under-determined (rank {rank} < {unknowns} unknowns)")]
    Underdetermined { rank: usize, unknowns: usize },

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
