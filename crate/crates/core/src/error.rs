use thiserror::Error;

/// Errors produced by covariance-matrix algebra and the correlation measures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("entropy argument {0} is below 1")]
    EntropyDomain(f64),

    #[error("matrix shape {rows}x{cols} is not a 2n x 2n covariance matrix")]
    BadShape { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("state is unphysical: {0}")]
    Unphysical(String),

    #[error("expected a {expected}-mode state, got {got} modes")]
    ModeCount { expected: usize, got: usize },

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    BadModeIndex { index: usize, n_modes: usize },

    #[error("matrix is not symplectic (residual {0:e})")]
    NotSymplectic(f64),

    #[error("Williamson decomposition residual {0:e} exceeds tolerance")]
    Decomposition(f64),

    #[error("numerically inconsistent invariants: {0}")]
    Inconsistent(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("state is not pure (det = {0})")]
    NotPure(f64),

    #[error("symplectic spectrum precondition violated: eigenvalue {value} at position {index}")]
    Spectrum { index: usize, value: f64 },

    #[error("minimizer did not converge; optimum bracketed in [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },

    #[error("rejection sampler stalled after {0} consecutive rejections")]
    SamplerStall(u64),

    #[error("failed to parse covariance matrix: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
