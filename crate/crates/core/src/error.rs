use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A kernel was evaluated on its singular set (coincident points).
    #[error("kernel evaluated at a singular point: {0}")]
    SingularPoint(&'static str),

    #[error("grid of {nodes} nodes exceeds the cap of {cap} nodes")]
    GridTooLarge { nodes: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations (last residual {residual:e})")]
    EigenNotConverged { iterations: usize, residual: f64 },

    #[error("quadrature did not reach tolerance: estimated error {estimate:e} after {intervals} subintervals")]
    QuadratureNotConverged { estimate: f64, intervals: usize },

    #[error("iteration did not converge: {0}")]
    NotConverged(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
