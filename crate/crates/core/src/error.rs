use thiserror::Error;

use crate::spectrum::DegeneracyFlag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: (d = {left_d}, n = {left_n}) vs (d = {right_d}, n = {right_n})")]
    GridMismatch { left_d: f64, left_n: usize, right_d: f64, right_n: usize },

    #[error("expected {expected} samples, got {actual}")]
    SampleCount { expected: usize, actual: usize },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("index {0} is out of range for this family")]
    InvalidIndex(usize),

    #[error("degenerate alpha: alpha*d/pi = {m} (eigenvalues collide, eigenfunctions undefined)", m = .0.m.unwrap_or(0))]
    Degenerate(DegeneracyFlag),

    #[error("function is not in the operator domain: Robin boundary residual {0:.3e}")]
    NotInDomain(f64),

    #[error("operation not supported for this function: {0}")]
    Unsupported(&'static str),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
