use std::io;

use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty instance")]
    EmptyInstance,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid set id {id} (instance has {n} sets)")]
    InvalidSetId { id: u32, n: usize },

    #[error("oracle returned set id {id} for element {element}, but only {n} sets exist")]
    OracleOutOfRange { element: u32, id: u32, n: usize },

    #[error("expansion of {requested} copies exceeds budget {budget}; use a larger eps")]
    ExpansionBudget { requested: u64, budget: u64 },

    #[error("enumeration of {requested} candidates exceeds budget {budget}")]
    EnumerationBudget { requested: u128, budget: u64 },

    #[error("infeasible outlier fraction")]
    Infeasible,

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
