use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarmoniaError {
    #[error("unknown space kind `{0}`")]
    UnknownKind(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("estimate did not converge: {0}")]
    NonConvergent(String),

    #[error("no positive Green's kernel: {0}")]
    NoGreenKernel(String),

    #[error("curvature operator has no decaying stable solution (eigenvalue {0} >= 0)")]
    NoStableSolution(f64),

    #[error("exponential-polynomial fit failed: {reason} (achieved residual {residual:e})")]
    FitFailed { reason: String, residual: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("root bracketing failed: {0}")]
    Bracketing(String),
}

pub type Result<T> = std::result::Result<T, HarmoniaError>;
