use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Location-tagged failure while reading one of the text formats.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("block index {index} out of range for partition with {blocks} blocks")]
    BlockIndex { index: usize, blocks: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("operator is not unitary (max deviation of U U* from I is {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("function value at block {block} (lambda = {lambda}) is not finite")]
    Evaluation { block: usize, lambda: f64 },

    #[error("multiplier undefined at frequency {0:?}")]
    UndefinedMultiplier(Vec<i64>),

    #[error("symbol has no blocks")]
    EmptySymbol,

    #[error("Schatten exponent must be positive, got {0}")]
    Exponent(f64),

    #[error("insufficient data: {usable} usable blocks, need at least {needed}")]
    InsufficientData { usable: usize, needed: usize },

    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
}

impl Error {
    /// True for failures of a numerical contract (as opposed to malformed
    /// input or arguments).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NoConvergence { .. }
                | Error::NotUnitary { .. }
                | Error::Evaluation { .. }
                | Error::UndefinedMultiplier(_)
                | Error::InsufficientData { .. }
        )
    }
}
