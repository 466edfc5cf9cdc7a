//! Error type shared by the assembly and recovery routines.

use thiserror::Error;

/// Failure modes of LMI assembly, registry bookkeeping, and filter recovery.
#[derive(Debug, Error)]
pub enum SynthError {
    /// A variable name was registered twice.
    #[error("variable `{0}` is already registered")]
    DuplicateVariable(String),

    /// A lookup referenced a variable the registry does not hold.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    /// A matrix block had the wrong shape for the slot it was placed in.
    #[error("dimension mismatch in {0}")]
    Dimension(String),

    /// A coefficient accumulated during assembly failed the symmetry check.
    #[error("constraint `{name}`: asymmetric coefficient (max skew {skew:.3e})")]
    AsymmetricCoefficient { name: String, skew: f64 },

    /// An input parameter was outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Filter recovery hit a coupling or gain matrix too close to singular.
    #[error("filter recovery degenerate for rule {rule}: rcond {rcond:.3e} below 1e-10")]
    RecoveryDegenerate { rule: usize, rcond: f64 },

    /// Propagated matrix computation failure.
    #[error(transparent)]
    Mat(#[from] matrixkit::MatError),

    /// Propagated plant validation failure.
    #[error(transparent)]
    Plant(#[from] plantmodel::PlantError),
}
