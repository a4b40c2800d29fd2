//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any fallible operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Incompatible or invalid matrix/vector dimensions.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A parameter is outside the mathematically valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation requiring a Hermitian matrix received a non-Hermitian one.
    #[error("matrix is not Hermitian (max deviation {max_deviation:.3e})")]
    NotHermitian { max_deviation: f64 },

    /// A matrix failed the density-matrix checks (hermiticity, unit trace,
    /// positive semidefiniteness).
    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// The requested post-selection branch carries (numerically) no weight.
    #[error("post-selection branch has vanishing probability ({probability:.3e})")]
    VanishingBranch { probability: f64 },

    /// A circuit violates its structural rules (bad indices, non-unitary
    /// blocks, overlapping controls).
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    /// Text-format circuit input could not be parsed.
    #[error("circuit parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Invalid configuration (bad keys, contradictory values, malformed file).
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem failure while reading inputs or writing outputs.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for usage/parameter/domain problems,
    /// 2 for i/o failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
