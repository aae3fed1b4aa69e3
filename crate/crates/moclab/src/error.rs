//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid manifold: {0}")]
    InvalidManifold(String),

    #[error("invalid coordinates: {0}")]
    InvalidCoordinates(String),

    /// The curvature drift coefficient has a tangent pole at `limit`; grids
    /// must stay staggered strictly below it.
    #[error("drift coefficient pole: s = {s} is within {pole_tol} of the pole at {limit}; keep the grid staggered below the pole")]
    DriftPole { s: f64, limit: f64, pole_tol: f64 },

    #[error("degenerate equation: {0}")]
    DegenerateDiffusion(String),

    #[error("CFL violation: {0}")]
    CflViolation(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("modulus binning: {0}")]
    EmptyBins(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),

    #[error("monotonicity lost: {0}")]
    MonotonicityLost(String),

    #[error("decreasing profile: {0}")]
    DecreasingProfile(String),

    #[error("initial hypothesis failed: {0}")]
    InitialHypothesis(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("malformed data file: {0}")]
    MalformedData(String),

    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
