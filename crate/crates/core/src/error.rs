use thiserror::Error;

use crate::denoise::SolveReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({0}, {0}) is a self-loop")]
    LoopEdge(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("edge {{{i}, {j}}} has nonpositive or non-finite weight {weight}")]
    InvalidWeight { i: usize, j: usize, weight: f64 },
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{kind} graph needs at least {min} vertices, got {n}")]
    TooFewVertices { kind: &'static str, min: usize, n: usize },
    #[error("matrix is not symmetric (max deviation {deviation:e})")]
    Asymmetric { deviation: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },
    #[error("expected a {expected} eigenbasis, got {actual}")]
    SourceMismatch {
        expected: &'static str,
        actual: &'static str,
    },
    #[error("kernel response is not finite at ({lambda1}, {lambda2})")]
    KernelNotFinite { lambda1: f64, lambda2: f64 },
    #[error("kernel has no tabulated response at ({lambda1}, {lambda2})")]
    KernelMissing { lambda1: f64, lambda2: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("polynomial degree ({s1}, {s2}) exceeds the bound ({max1}, {max2})")]
    DegreeOverflow {
        s1: usize,
        s2: usize,
        max1: usize,
        max2: usize,
    },
    #[error("factor spectrum has repeated eigenvalues; Vandermonde matrix is singular")]
    RepeatedEigenvalues,
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("negative spectral variance {value} at ({k1}, {k2})")]
    NegativeVariance { k1: usize, k2: usize, value: f64 },
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("solver did not converge after {} iterations (residual {:e})", .0.iterations, .0.residual)]
    NotConverged(Box<SolveReport>),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("imaginary residue {0:e} exceeds tolerance for a real-valued result")]
    ComplexResidue(f64),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, actual: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
