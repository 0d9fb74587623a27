use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: error estimate {estimate:.3e} after {intervals} intervals")]
    NonConvergence { estimate: f64, intervals: usize },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("accuracy loss: error estimate {estimate:.3e} exceeds target {target:.3e}")]
    AccuracyLoss { estimate: f64, target: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("result changed by {delta:.3e} under grid halving (tolerance {tol:.3e})")]
    ResolutionWarning { delta: f64, tol: f64 },

    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),

    #[error("state violates the closure domain: |F(±1/2)| = {boundary:.3e}")]
    DomainViolation { boundary: f64 },

    #[error("spectral truncation bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    TruncationWarning { bound: f64, tol: f64 },
}
