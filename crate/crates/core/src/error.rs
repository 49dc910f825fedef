use thiserror::Error;

use crate::topology::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected a set over {expected} points, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("term uses generator g{index} but only {available} set(s) were assigned")]
    Arity { index: usize, available: usize },

    #[error("{what} = {requested} exceeds the supported cap of {cap}")]
    Cap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("{what} = {value} is out of range (valid: {valid})")]
    Range {
        what: &'static str,
        value: usize,
        valid: String,
    },

    #[error("invalid space: {0}")]
    InvalidSpace(Box<ValidationReport>),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("terms `{first}` and `{second}` agree on every space with at most {bound} points; order is not antisymmetric at this bound")]
    NotAntisymmetric {
        first: String,
        second: String,
        bound: usize,
    },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
