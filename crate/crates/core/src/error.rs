use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension {dim} is not a power of two (qubit mapping requires dim = 2^q, q >= 1)")]
    NotPowerOfTwo { dim: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {asymmetry:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("Pauli coefficient for {label} has imaginary part {imag:e} (input is not Hermitian)")]
    ComplexCoefficient { label: String, imag: f64 },

    #[error("eigensolver did not converge after {iterations} sweeps on a {dim}x{dim} matrix")]
    NoConvergence { dim: usize, iterations: usize },

    #[error("objective returned a non-finite value {value} at parameters {params:?}")]
    NonFiniteObjective { value: f64, params: Vec<f64> },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
