use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("enumeration cap exceeded: {what} is {value}, limit is {limit}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("code containment violated: {0}")]
    Containment(String),

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("search budget exhausted after {trials} trials; best epsilon found {best}")]
    BudgetExhausted { trials: usize, best: String },

    #[error("missing input: {0}")]
    Missing(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn cap(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::CapExceeded { what, value, limit })
    } else {
        Ok(())
    }
}
