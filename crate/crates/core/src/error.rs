use thiserror::Error;

/// Errors raised while reading, typing or validating terms and problems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),

    #[error("type mismatch in `{context}`: expected {expected}, found {found}")]
    TypeMismatch {
        context: String,
        expected: String,
        found: String,
    },

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("missing section [{0}]")]
    MissingSection(String),

    #[error("dangling occurrence tag `^{0}`")]
    DanglingOccurrenceTag(String),

    #[error("parallel element lists differ in length ({source_len} source vs {target_len} target)")]
    ArityMismatch { source_len: usize, target_len: usize },

    #[error("conflicting tags on `^{label}`: {first} and {second}")]
    ConflictingTags {
        label: String,
        first: String,
        second: String,
    },

    #[error("duplicate declaration of `{0}`")]
    DuplicateSymbol(String),

    #[error("invalid problem: {0}")]
    Invalid(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn mismatch(context: impl ToString, expected: impl ToString, found: impl ToString) -> Self {
        Error::TypeMismatch {
            context: context.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
