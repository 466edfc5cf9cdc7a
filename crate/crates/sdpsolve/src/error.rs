//! Error type shared by the solver entry points.

use lmisynth::SynthError;
use matrixkit::MatError;
use thiserror::Error;

/// Failure modes of the solver entry points.
#[derive(Debug, Error)]
pub enum SolverError {
    /// The problem violates a structural assumption of the solver.
    #[error("problem rejected: {0}")]
    Assembly(String),
    /// Problem assembly inside a search callback failed.
    #[error(transparent)]
    Synth(#[from] SynthError),
    /// A dense linear-algebra kernel failed.
    #[error(transparent)]
    Mat(#[from] MatError),
    /// Options failed validation.
    #[error("invalid solver options: {0}")]
    BadOptions(String),
    /// No feasible gamma was found within the bracket expansion cap.
    #[error("no feasible point found up to gamma = {last_gamma}")]
    BracketFailure {
        /// Largest gamma probed before giving up.
        last_gamma: f64,
    },
}
