use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("matrix rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("matrix coefficient is not anti-hermitian (defect {defect:e})")]
    NotAntiHermitian { defect: f64 },

    #[error("not an orthogonal complex structure (defect {defect:e}): {context}")]
    NotComplexStructure { context: String, defect: f64 },

    #[error("form is not the Kähler form of an orthogonal complex structure (A²+Id residual {defect:e})")]
    NotKahlerForm { defect: f64 },

    #[error("(a, b, c) must be a unit vector (|a²+b²+c²−1| = {defect:e})")]
    NotUnitVector { defect: f64 },

    #[error("form lies outside the required subspace ({context}, residual {defect:e})")]
    NotInSubspace { context: String, defect: f64 },

    #[error("input is not HYM with respect to the given structure (type-(2,0) residual {type20:e}, off-identity residual {off_identity:e})")]
    NotHym { type20: f64, off_identity: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("calibration inequality violated: {context} (value {value:e})")]
    CalibrationViolated { context: String, value: f64 },

    #[error("search over pairings and signs failed: {0}")]
    SearchFailed(String),

    #[error("schema violation at {field}: {message}")]
    Schema { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
