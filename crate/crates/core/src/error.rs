use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes after substitution: {0}")]
    DenominatorVanishes(String),
    #[error("pole at {var} = 0{context}")]
    PoleAtZero { var: String, context: String },
    #[error("invalid parameter name `{0}`")]
    InvalidParamName(String),
    #[error("operands live over different generator alphabets")]
    AlphabetMismatch,
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("rewriting exceeded {0} steps")]
    NonTerminatingGuard(usize),
    #[error("unknown presentation `{0}`")]
    UnknownPresentation(String),
    #[error("unknown R-matrix `{0}`")]
    UnknownRMatrix(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown generator `{name}` at {line}:{col}")]
    UnknownGenerator { name: String, line: usize, col: usize },
    #[error("relation cannot be oriented into a decreasing rule: {0}")]
    NonDecreasingRule(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("relation is not homogeneous of degree 2: {0}")]
    NonHomogeneous(String),
    #[error("image products do not close on the primed generators: {0}")]
    NotClosed(String),
    #[error("coefficient does not depend only on the target parameters: {0}")]
    DependenceViolation(String),
    #[error("input outside the supported range: {0}")]
    OutOfContract(String),
    #[error("malformed data: {0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }
}
