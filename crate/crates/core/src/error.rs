use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("principal part is not skew-symmetrizable: {0}")]
    NotSkewSymmetrizable(String),
    #[error("direction {k} out of range for rank {n}")]
    DirectionOutOfRange { k: usize, n: usize },
    #[error("malformed quiver: {0}")]
    MalformedQuiver(String),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("principal parts differ")]
    PrincipalPartsDiffer,
    #[error("expression exceeds the term cap of {cap}")]
    TermCapExceeded { cap: usize },
    #[error("principal quiver is not bipartite")]
    NotBipartite,
    #[error("exchange graph is not finite within the node cap")]
    NotFinite,
    #[error("none of the (star) conditions could be established")]
    StarConditionUnknown,
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
    #[error("move {mv} is not supported for type {ty}")]
    UnsupportedMove { ty: String, mv: String },
    #[error("no closed form for this parity of {0}")]
    UnsupportedParity(String),
    #[error("exponent does not fit in 64 bits")]
    ExponentOverflow,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}
