use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator set mismatch: {0}")]
    GeneratorMismatch(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown marked submanifold `{label}` in block `{block}`")]
    UnknownLabel { block: String, label: String },

    #[error("duplicate marked submanifold label `{0}`")]
    DuplicateLabel(String),

    #[error("genus mismatch: `{left}` has genus {left_genus}, `{right}` has genus {right_genus}")]
    GenusMismatch {
        left: String,
        left_genus: usize,
        right: String,
        right_genus: usize,
    },

    #[error("invalid marked submanifold: {0}")]
    InvalidMarking(String),

    #[error("invalid gluing match: {0}")]
    InvalidMatch(String),

    #[error("invalid surgery direction: {0}")]
    InvalidDirection(String),

    #[error("unknown builtin `{name}`; catalog has: {available}")]
    UnknownBuiltin { name: String, available: String },

    #[error("certificate check failed: {0}")]
    Certificate(String),

    #[error("invalid block document: {0}")]
    Document(String),
}
