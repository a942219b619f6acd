use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("cycle notation: {0}")]
    CycleNotation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix file line {line}: {message}")]
    MatrixFormat { line: usize, message: String },

    #[error("matrix entry ({row}, {col}): {message}")]
    MatrixEntry {
        row: usize,
        col: usize,
        message: String,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("permutation uses an infinite arc at row {0}")]
    InfiniteArc(usize),

    #[error("no start vertex satisfies the bound (total {total}, bound {bound})")]
    NoDeterminingVertex { total: String, bound: String },

    #[error("instance too large for exhaustive search: n = {n}, cap {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
