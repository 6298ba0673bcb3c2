use thiserror::Error;

/// Errors raised by the exact-geometry layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// A documented precondition of the operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),
}

/// Errors raised while reading correspondence files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid number `{0}`")]
    Number(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("input contains no correspondences")]
    Empty,
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
