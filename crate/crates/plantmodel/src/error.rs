use thiserror::Error;

/// Errors raised while constructing or sampling plant models.
#[derive(Debug, Error)]
pub enum PlantError {
    #[error("all membership activations are zero")]
    DegenerateMembership,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid bound: {0}")]
    InvalidBound(String),
    #[error("uncertainty resample cap reached after {attempts} draws")]
    UncertaintyResample { attempts: usize },
    #[error(transparent)]
    Mat(#[from] matrixkit::MatError),
}
