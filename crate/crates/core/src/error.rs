use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("{what} exceeds the limit of {limit}")]
    ResourceExceeded { what: &'static str, limit: usize },
    #[error("variety mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: String, found: String },
    #[error("dual map is not a function: {0}")]
    NonFunctional(String),
    #[error("algebra is not reachable from its initial element")]
    NotReachable,
    #[error("not closed under right derivatives: {0}")]
    NotRqcClosed(String),
    #[error("round trip lost {language} (present only in the {only_in})")]
    Counterexample { language: String, only_in: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn tag_mismatch(expected: impl ToString, found: impl ToString) -> Self {
        Error::TagMismatch { expected: expected.to_string(), found: found.to_string() }
    }
}
