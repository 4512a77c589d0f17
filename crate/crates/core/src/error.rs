use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HubbardError {
    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("eigensolver did not converge after {iterations} matvecs (best residual {best_residual:.3e}, required {required:.3e})")]
    NotConverged {
        iterations: usize,
        best_residual: f64,
        required: f64,
    },

    #[error("quadrature failed to reach tolerance {requested:.3e} (error estimate {estimate:.3e}, value {value})")]
    Quadrature { value: f64, estimate: f64, requested: f64 },

    #[error("state is not normalized: |psi| = {0}")]
    Unnormalized(f64),

    #[error("population {0} is negative beyond roundoff")]
    NegativePopulation(f64),
}

impl HubbardError {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Self::InvalidSector(_) | Self::InvalidParams(_))
    }
}

pub type Result<T> = std::result::Result<T, HubbardError>;
