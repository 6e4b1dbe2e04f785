use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision must be between 2 and 16777216 bits, got {0}")]
    InvalidPrecision(u64),
    #[error("output digit count must be at least 1, got {0}")]
    InvalidDigits(usize),
    #[error("malformed decimal number {0:?}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (deviation {0})")]
    NotHermitian(String),
    #[error("matrix is not unitary (deviation {0})")]
    NotUnitary(String),
    #[error("matrix is singular")]
    Singular,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid qubit selection: {0}")]
    InvalidQubits(String),
    #[error("corrupted state: {0}")]
    CorruptedState(String),
    #[error("line {line}: {message}")]
    Circuit { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
