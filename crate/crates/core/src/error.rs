use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed matrix market input (line {line}): {msg}")]
    MatrixMarket { line: usize, msg: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension not power of two: {0}")]
    NotPowerOfTwo(usize),

    #[error("entry ({row}, {col}) out of range for dimension {dim}")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },

    #[error("{what} limited to {max} qubits, got {got}")]
    TooManyQubits {
        what: &'static str,
        max: usize,
        got: usize,
    },

    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),

    #[error("width mismatch: expected {expected} qubits, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid factor string {0:?}")]
    InvalidFactors(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("qubit {qubit} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("qubit {0} used more than once in a gate")]
    QubitCollision(usize),

    #[error("matrix {label:?} is not unitary (deviation {deviation:e})")]
    NotUnitary { label: String, deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
