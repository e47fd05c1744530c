use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The level set `L_0` is the single point `0`.
    #[error("level s = {0} is degenerate: L_0 is a single point")]
    DegenerateLevel(f64),

    #[error("level s = {0} is outside the supported range (0, 1 - 1e-12)")]
    LevelOutOfRange(f64),

    /// `c = 0` is the complete (euclidean) structure and has no parallelogram.
    #[error("c = 0 is the complete structure; no parallelogram or slope is defined there")]
    CompleteStructure,

    #[error("{0}")]
    Domain(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("packing window too large: exponent {0:.3} exceeds the floating range guard")]
    Window(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
