use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid set: {0}")]
    Validation(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("rank {rank} out of range for a finite set of size {size}")]
    OutOfRange { rank: u64, size: usize },

    #[error("index {index} out of range for collection `{collection}` of length {len}")]
    IndexOutOfRange {
        collection: String,
        index: usize,
        len: usize,
    },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("no language among the first {t} is consistent with the input")]
    NoConsistentLanguage { t: usize },

    #[error("query budget of {budget} exhausted at step {step}")]
    BudgetExhausted { step: usize, budget: usize },

    #[error("language is finite: {0}")]
    FiniteLanguage(String),

    #[error("element {x} is not in the target language")]
    NotInLanguage { x: i64 },

    #[error("configuration: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
