//! Dense real matrix substrate for the filter-synthesis workspace.
//!
//! Provides the small-scale numerical kernels everything else is built on:
//! symmetric eigendecomposition (tridiagonalization + implicit QL), LU-based
//! linear solves with iterative refinement, Cholesky factorization, Kronecker
//! products, and block-matrix assembly with a symmetric mirror rule. All
//! matrices are dense and row-major; the structures handled here are small
//! (block grids of a few dozen rows), so sparsity is deliberately not
//! exploited at this layer.

mod block;
mod dense;
mod eig;
mod error;
mod linsolve;
mod qr;
mod sym;

pub use block::{assemble_blocks, assemble_symmetric, kron, BlockLayout};
pub use dense::Matrix;
pub use eig::{is_negative_definite, is_positive_definite, rank_via_gram, sym_eig};
pub use error::MatError;
pub use linsolve::{
    cholesky, determinant, inverse, lu_factor, rcond, solve_cholesky, solve_linear, LuFactors,
};
pub use qr::mgs_qr;
pub use sym::SymmetricMatrix;
