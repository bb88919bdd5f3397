use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("permutation degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("generator alphabet is empty")]
    EmptyAlphabet,

    #[error("word too long: expansion exceeds {0} letters")]
    WordTooLong(usize),

    #[error("group definition, line {line}: {message}")]
    Definition { line: usize, message: String },

    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),

    #[error("point {point} outside 1..{degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("invalid vertex {0:?}")]
    InvalidVertex(String),

    #[error("depth {depth} exceeds limit {limit}")]
    DepthLimit { depth: usize, limit: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
