use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} did not converge: {detail}")]
    NoConvergence { what: &'static str, detail: String },

    #[error("argument out of supported range: {0}")]
    Range(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("t = {t} is outside the short-time validity window (horizon {horizon})")]
    Validity { t: f64, horizon: f64 },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures of an iterative or quadrature scheme, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
