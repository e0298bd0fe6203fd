use thiserror::Error;

/// Errors raised by the numerics in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} spatial components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("singular kernel: coincident pointlike detectors in 3+1 dimensions (L = 0)")]
    SingularKernel,

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("quadrature did not converge: error estimate {estimate:e} above tolerance {tolerance:e}")]
    NonConvergence { estimate: f64, tolerance: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("integration box too small: {0}")]
    BoxTooSmall(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Stable machine-readable tag, used by the CLI's error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::SingularKernel => "singular_kernel",
            Error::OutOfDomain(_) => "out_of_domain",
            Error::InvalidState(_) => "invalid_state",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Unsupported(_) => "unsupported",
            Error::BoxTooSmall(_) => "box_too_small",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
