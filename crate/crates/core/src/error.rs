use thiserror::Error;

/// Errors reported by the library.
///
/// `Parse` covers malformed input files (edge lists, signature JSON),
/// `Precondition` covers contract violations on otherwise well-formed data,
/// and `BudgetExceeded` is returned when an enumeration would exceed the
/// configured assignment budget instead of silently sampling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Precondition(String),

    #[error("enumeration budget exceeded: {required} assignments > budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn pre(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
