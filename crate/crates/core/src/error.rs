use thiserror::Error;

use crate::cmat::CMatrix;

/// Errors raised by the geometry engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: String, actual: String },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not skew-Hermitian: ‖A + A*‖_F = {residual:e}")]
    NotSkewHermitian { residual: f64 },

    #[error("matrix is not unitary: ‖U*U − I‖_F = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("columns are not orthonormal: ‖F*F − I‖_F = {residual:e}")]
    NotOrthonormal { residual: f64 },

    #[error("matrix is not a rank-{rank} orthogonal projector: {reason}")]
    NotProjector { rank: usize, reason: String },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("rank deficient input: smallest singular value {sigma_min:e}")]
    RankDeficient { sigma_min: f64 },

    #[error("matrix does not lie in the tangent complement 𝔪: 𝔥-block norm {residual:e}")]
    NotInM { residual: f64 },

    #[error("condition X*X = λI, X*Y = μI violated: {reason}\n{gram}")]
    StarViolation { reason: String, gram: CMatrix },

    #[error("X and Y do not span a real 2-plane (Gram determinant {det:e})")]
    DegeneratePlane { det: f64 },

    #[error("surface is not totally geodesic; no chart is available")]
    NotTotallyGeodesic,

    #[error("loop is not closed: endpoint gap {gap:e}")]
    NotClosed { gap: f64 },

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("chart domain violation: {0}")]
    ChartDomain(String),

    #[error("initial frame does not project to the path start: ‖F₀F₀* − P(0)‖_F = {residual:e}")]
    FrameMismatch { residual: f64 },

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape(expected: impl Into<String>, actual: impl Into<String>) -> Error {
    Error::Shape {
        expected: expected.into(),
        actual: actual.into(),
    }
}
