use thiserror::Error;

/// Errors raised by the library. Harness code maps them to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("grid mismatch")]
    GridMismatch,
    #[error("symbol must be smoothed before quantization")]
    NotSmoothed,
    #[error("symbol is not positive")]
    NotPositive,
    #[error("time index {index} out of range (symbol has {len} slices)")]
    TimeIndex { index: usize, len: usize },
    #[error("CFL violation: dt = {dt:.3e} exceeds {limit:.3e}")]
    Cfl { dt: f64, limit: f64 },
    #[error("non-finite state at t = {t:.6}")]
    NonFinite { t: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
