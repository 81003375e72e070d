use thiserror::Error;

/// Errors raised by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point {point:?} (or a finite-difference stencil point around it) lies outside the chart")]
    OutOfChart { point: Vec<f64> },

    #[error("metric is not positive definite at {point:?}")]
    NotPositiveDefinite { point: Vec<f64> },

    #[error("metric is singular at {point:?}")]
    SingularMetric { point: Vec<f64> },

    #[error("g-natural metric is degenerate at t = {t} (|alpha * phi| = {value:e})")]
    DegenerateAt { t: f64, value: f64 },

    #[error("inverse side condition {condition} fails at t = {t} (value {value:e})")]
    SideConditionFailed {
        t: f64,
        condition: &'static str,
        value: f64,
    },

    #[error("mu(a, b, u) is singular: a * (a + b |u|^2) = {value:e}")]
    SingularMu { value: f64 },

    #[error("unknown profile preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown manifold `{0}` (expected one of flat2, flat3, sphere2, halfplane2)")]
    UnknownManifold(String),

    #[error("plane is degenerate: Gram determinant {gram:e}")]
    DegeneratePlane { gram: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid manifold: {0}")]
    InvalidManifold(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
