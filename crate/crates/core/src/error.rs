use thiserror::Error;

/// Errors raised by model construction, distance and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("stability index mismatch: {0} vs {1}")]
    AlphaMismatch(f64, f64),

    #[error("reference norm mismatch: {0} vs {1}")]
    NormMismatch(String, String),

    /// Marginal moments of an angular measure or representer are not 1.
    #[error("marginal moment of coordinate {coord} is {moment}, expected 1")]
    NotNormalized { coord: usize, moment: f64 },

    #[error("point is not on the unit sphere: norm = {0}")]
    OffSphere(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPsd(f64),

    /// The model does not expose the requested representation.
    #[error("unsupported for this model: {0}")]
    Unsupported(String),

    #[error("numerical routine did not converge: {0}")]
    Nonconvergence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
