use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation received arguments violating its contract.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range for {len} cells")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(
        "quadrature did not reach tolerance {tolerance:e}: achieved error estimate {achieved:e}"
    )]
    QuadratureNonConvergence { tolerance: f64, achieved: f64 },

    #[error("large-rapidity samples are not Cauchy: last successive difference {last_difference:e} exceeds {tolerance:e}")]
    ExtrapolationFailure {
        last_difference: f64,
        tolerance: f64,
    },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error(
        "eigensolver did not converge after {iterations} iterations (best residual {residual:e})"
    )]
    EigenNonConvergence { iterations: usize, residual: f64 },

    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("wavefunction has zero norm")]
    ZeroNorm,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
