use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} {value} exceeds the configured maximum {max}")]
    LimitExceeded { what: &'static str, value: u64, max: u64 },

    #[error("invalid letter {0:?}: expected 'a' or 'b'")]
    InvalidLetter(char),

    #[error("invalid ternary digit {0:?}")]
    InvalidDigit(char),

    #[error("overline is undefined for {0:?}")]
    OverlineUndefined(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
