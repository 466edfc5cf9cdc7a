use thiserror::Error;

/// Numerical and structural failures surfaced by the matrix kernels.
#[derive(Debug, Clone, Error)]
pub enum MatError {
    /// The implicit QL iteration failed to isolate an eigenvalue within the
    /// iteration cap; carries the matrix dimension for diagnostics.
    #[error("symmetric eigensolver did not converge for a {dim}x{dim} matrix")]
    EigenNonConvergence { dim: usize },

    /// Linear solve rejected a matrix whose reciprocal condition estimate is
    /// below the singularity tolerance.
    #[error("matrix is singular to working precision (rcond = {rcond:.3e})")]
    Singular { rcond: f64 },

    /// Cholesky factorization hit a nonpositive pivot.
    #[error("matrix is not positive definite (pivot {pivot} was {value:.3e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    /// A matrix was built or combined with inconsistent dimensions.
    #[error("shape error: {0}")]
    Shape(String),

    /// A NaN or infinity was found at construction time.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}
