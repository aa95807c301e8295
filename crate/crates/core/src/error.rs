use thiserror::Error;

/// Errors raised by the solver pipeline.
#[derive(Debug, Error)]
pub enum FsiError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("Krylov solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("Krylov solver breakdown at iteration {iterations} (relative residual {residual:.3e})")]
    Breakdown { iterations: usize, residual: f64 },

    #[error("blow-up detected at step {step} (t = {time:.6}): max |u| = {max_speed:.3e}")]
    BlowUp { step: usize, time: f64, max_speed: f64 },

    #[error("{count} degenerate deformation cells inside the interface band at step {step}")]
    DegenerateBand { step: usize, count: usize },

    #[error("singular tridiagonal system")]
    SingularSystem,

    #[error("contour extraction failed: {0}")]
    Contour(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl FsiError {
    /// Numerical failures (as opposed to configuration or I/O problems).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            FsiError::NonConvergence { .. }
                | FsiError::Breakdown { .. }
                | FsiError::BlowUp { .. }
                | FsiError::DegenerateBand { .. }
                | FsiError::SingularSystem
                | FsiError::Contour(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, FsiError>;
