use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension factor {factor}: every factor must be an odd prime")]
    InvalidFactor { factor: usize },

    #[error("empty dimension specification")]
    EmptySpec,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("not a quantum state: {reason}")]
    NotAState { reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: String },

    #[error("unknown named state `{0}`")]
    UnknownState(String),

    #[error("solver failure ({status}) in `{program}`")]
    Solver { program: String, status: String },

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::Solver { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
