//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A body description violated one of its invariants. The message names
    /// the violated invariant.
    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),

    #[error("singular or ill-conditioned matrix: {0}")]
    Singular(String),

    /// The requested point is on the boundary or outside the body, where the
    /// polar dual about that point is unbounded.
    #[error("point is not strictly interior to the body")]
    NotInterior,

    /// The operation requires a centered body; translate first or use the
    /// `_about` variant.
    #[error("body carries a nonzero center offset; use polar_dual_about")]
    TranslatedBody,

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Iterative search exhausted its budget. Carries the best iterate seen
    /// and its objective value.
    #[error("search did not converge within the iteration budget (best objective {objective})")]
    NoConvergence { best: Vec<f64>, objective: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    /// The grid half-extent is too small for the requested state; the message
    /// reports the boundary magnitude.
    #[error("insufficient grid extent: {0}")]
    Truncation(String),

    #[error("degenerate bounding box for Monte Carlo sampling")]
    DegenerateBox,

    #[error("serialization: {0}")]
    Serialization(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
