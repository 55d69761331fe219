use thiserror::Error;

use crate::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported charge N = {0} (minimum is 8)")]
    UnsupportedCharge(usize),
    #[error("invalid configuration: {reason}")]
    InvalidConfiguration { reason: String, point: Option<usize> },
    #[error("singular evaluation at ({:.6}, {:.6}, {:.6})", .0.x, .0.y, .0.z)]
    SingularEvaluation(Point),
    #[error("chart violation: {0}")]
    ChartViolation(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
