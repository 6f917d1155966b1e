use thiserror::Error;

/// Errors raised across the toolkit.
///
/// `Validation` and `Budget` map onto the CLI's exit codes 2 and 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbError {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("enumeration budget exceeded: {what} needs {needed} but the budget is {budget}")]
    Budget {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing structure constant for labels ({0}, {1}, {2})")]
    MissingConstant(String, String, String),

    #[error("limit anomaly: {0}")]
    LimitAnomaly(String),
}

impl OrbError {
    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, budget: u64) -> Self {
        OrbError::Budget {
            what: what.into(),
            needed: needed.to_string(),
            budget,
        }
    }
}

pub type Result<T> = std::result::Result<T, OrbError>;
