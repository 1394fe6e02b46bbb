use thiserror::Error;

/// Errors raised by the numerical kernels and domain operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (residual {residual:e}, tolerance {tolerance:e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("matrix is singular or ill-conditioned (reciprocal condition {rcond:e})")]
    Singular { rcond: f64 },

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("numerically unstable evaluation: {0}")]
    Unstable(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{method} did not converge within {iterations} iterations")]
    NoConvergence { method: &'static str, iterations: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("Fréchet mean solver failed at iteration {iteration}: {cause}")]
    Frechet { iteration: usize, cause: Box<Error> },

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// True for errors caused by points at or beyond a domain boundary or by
    /// a numerically degenerate factorization.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Shape(_) | Error::InvalidArgument(_) | Error::Format(_) => false,
            Error::Frechet { cause, .. } => cause.is_numerical(),
            _ => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
