//! Interior-point solver for the affine matrix-inequality problems built by
//! `lmisynth`.
//!
//! Every definite constraint is normalized to a positive-definite block
//! `G(x)`; feasibility maximizes the common slack margin with a logarithmic
//! barrier and Newton steps, and linear objectives are minimized by barrier
//! path-following from a feasible interior point. The returned verdict never
//! trusts the iteration: an independent dense eigenvalue sweep over all
//! constraints decides the final status. Scalar searches wrap the
//! feasibility oracle for attenuation-level bisection and certificate
//! multiplier grids.

mod blocks;
mod error;
mod feasibility;
mod newton;
mod objective;
mod options;
mod result;
mod search;
mod verify;

pub use error::SolverError;
pub use feasibility::solve_feasibility;
pub use objective::minimize_objective;
pub use options::SolveOptions;
pub use result::{ConstraintMargin, SolveResult, SolveStatus};
pub use search::{default_eps_grid, eps_grid_search, min_gamma, EpsSearch, GammaSearch};
