//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    /// The polynomial is identically equal to the target level on the
    /// whole interval, so the root set is the interval itself.
    #[error("degenerate root problem: polynomial vanishes identically on the interval")]
    DegenerateRoots,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failed to converge: best estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("wave kind is inconsistent with the interval diagnosis: {0}")]
    KindMismatch(String),

    #[error("composite supports overlap: offsets {0} and {1} are closer than one support length")]
    OverlappingSupports(f64, f64),

    #[error("profile support too short for test-function width {width}")]
    SupportTooShort { width: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
