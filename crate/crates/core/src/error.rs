use alloc::string::String;

/// Errors raised by the core crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("histogram grids differ: {0}")]
    GridMismatch(String),
    #[error("time {requested} lies beyond the simulated horizon {horizon}")]
    BeyondHorizon { requested: f64, horizon: f64 },
    #[error("run was recorded without lineage; only the final population is known")]
    LineageMissing,
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! numeric {
    ($($arg:tt)*) => { $crate::Error::Numeric(alloc::format!($($arg)*)) };
}
macro_rules! config {
    ($($arg:tt)*) => { $crate::Error::Config(alloc::format!($($arg)*)) };
}
pub(crate) use {config, domain, numeric};
