use num_complex::Complex64;
use thiserror::Error;

/// Failures raised anywhere in the reduction pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shifted matrix A - sE is numerically singular at s = {shift}")]
    SingularShift { shift: Complex64 },
    #[error("mass matrix is numerically singular")]
    SingularMass,
    #[error("projected mass matrix W^H E V is numerically singular")]
    SingularReducedMass,
    #[error("vector lies in the span of the current basis (relative residual {residual:.3e})")]
    RankDeficient { residual: f64 },
    #[error("Lanczos biorthogonalization broke down at step {step}")]
    Breakdown { step: usize },
    #[error("evaluation point {z} coincides with a Ritz value")]
    PoleAtZ { z: Complex64 },
    #[error("divided difference over repeated node {node}")]
    RepeatedNode { node: Complex64 },
    #[error("iteration did not converge after {iterations} steps")]
    NonConvergence { iterations: usize },
    #[error("no admissible candidate shift remains on the sample set")]
    DeadlockNoCandidate,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
