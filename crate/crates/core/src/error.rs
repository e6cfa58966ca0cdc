use crate::expr::{EvalError, ParseError};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("accuracy cannot be guaranteed: {0}")]
    Accuracy(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("phi validation failed: {0}")]
    PhiValidation(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),
    #[error("picard iteration did not converge after {iterations} iterations (last update {last_update:e})")]
    NonConvergence { iterations: usize, last_update: f64 },
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
