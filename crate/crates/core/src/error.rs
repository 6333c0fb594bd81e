use thiserror::Error;

/// Errors raised by table construction, oracles, algorithms and the harness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input index {index} out of range for {n} variables")]
    InputOutOfRange { index: usize, n: usize },

    #[error("variable index {index} out of range for {n} variables")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("{n} variables exceeds the table limit of {max}")]
    TooManyVariables { n: usize, max: usize },

    #[error("truth tables need at least one variable")]
    NoVariables,

    #[error("table entry {value} at index {index} is not -1 or +1")]
    InvalidEntry { index: usize, value: i64 },

    #[error("expected {expected} table entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("variable counts differ: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("malformed junta: {0}")]
    MalformedJunta(String),

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("work budget exceeded: needs {needed} units, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("spectrum fails Parseval: sum of squares {sum} != {expected}")]
    InvalidSpectrum { sum: u128, expected: u128 },

    #[error("FS oracle reported a sampling failure")]
    OracleFailure,

    #[error("unexpected FS response {0:?} for an addressing instance")]
    MalformedResponse(Vec<usize>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
