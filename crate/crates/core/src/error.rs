use thiserror::Error;

/// Failures reported by the library. All of them are input errors; the
/// algorithms themselves are total on valid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("malformed matrix string: {0}")]
    MatrixSyntax(String),
    #[error("matrix has no entries")]
    EmptyMatrix,
    #[error("doublet count {0} out of supported range")]
    DoubletRange(usize),
    #[error("invalid monomial: {0}")]
    InvalidMonomial(String),
    #[error("order {p} out of range 1..={max}")]
    OrderRange { p: u64, max: u64 },
    #[error("malformed partition: {0}")]
    Partition(String),
    #[error("unknown group name {0:?}")]
    GroupName(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
