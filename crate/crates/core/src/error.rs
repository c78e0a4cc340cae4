use thiserror::Error;

use crate::classify::UnsupportedReason;

pub type Result<T, E = CevmError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CevmError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("inverse undefined: level {level} exceeds the range of the function")]
    InverseUndefined { level: f64 },

    #[error("survival function is not monotone: {0}")]
    NonMonotone(String),

    #[error("missing finite endpoint: {0}")]
    MissingEndpoint(&'static str),

    #[error("beyond endpoint: {x} >= {endpoint}")]
    BeyondEndpoint { x: f64, endpoint: f64 },

    #[error("point ({x}, {y}) lies outside the declared support")]
    OutsideSupport { x: f64, y: f64 },

    #[error("pivot singular at ({x}, {y})")]
    PivotSingular { x: f64, y: f64 },

    #[error("unsupported case: {0}")]
    Unsupported(UnsupportedReason),

    #[error("unsupported coupling: |rho| = {rho_abs} exceeds |gamma| = {gamma_abs}")]
    UnsupportedCoupling { rho_abs: f64, gamma_abs: f64 },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("insufficient tail data: {found} exceedances, need at least {required}")]
    InsufficientTailData { found: usize, required: usize },

    #[error("degenerate spread: {0}")]
    DegenerateSpread(String),
}

impl CevmError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        CevmError::InvalidArgument(msg.into())
    }
}
