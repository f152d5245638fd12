use thiserror::Error;

/// Errors surfaced by the library. Numerical *flags* (degenerate samples,
/// refinement warnings) ride along in reports; these are the hard failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Monotonicity of a lift was lost after interpolation; usually means the
    /// grid is too coarse for the maps being combined.
    #[error("monotonicity lost: {0}")]
    Monotonicity(String),

    #[error("aliasing: spectral tail carries {tail_fraction:.3e} relative energy (limit {limit:.1e})")]
    Aliasing { tail_fraction: f64, limit: f64 },

    #[error("branch tracking failed: {0}")]
    Branch(String),

    #[error("degenerate derivative: {0}")]
    DegenerateDerivative(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("finite-difference step did not converge: {0}")]
    StepSize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
