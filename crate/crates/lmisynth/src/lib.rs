//! Linear matrix inequality assembly for fuzzy filter analysis and synthesis.
//!
//! The crate turns a fuzzy plant description into concrete semidefinite
//! feasibility data: a registry of named matrix variables packed into one
//! scalar vector, affine constraint blocks with sparse symmetric
//! coefficients, and assembly routines for the stability analysis and filter
//! synthesis programs, including a robust variant with uncertainty
//! certificate columns. Solutions are mapped back to filter state-space
//! realizations through an explicit recovery step.

mod analysis;
mod builder;
mod constraint;
mod descriptor;
mod error;
mod error_system;
mod filter;
mod grid;
mod registry;
mod synthesis;

pub use analysis::{assemble_analysis, AnalysisOptions, AnalysisProblem, AnalysisVars};
pub use builder::ConstraintBuilder;
pub use constraint::{
    dimension_audit, AffineConstraint, AuditEntry, DimensionAudit, LmiProblem, Sense, SparseSym,
};
pub use descriptor::{
    descriptor_symmetry_audit, materialize_param, place_param, place_param_sym, place_param_t,
    register_param_var, DescriptorParam, ParamVar,
};
pub use error::SynthError;
pub use error_system::{build_error_system, DeltaMode, ErrorSystem};
pub use filter::{
    forward_transform, recover_filter, FilterRealization, FilterRule, RecoveryDiagnostics,
    TildeVariables,
};
pub use grid::{
    add_grid_core, decay_and_coupling_constraints, register_lkf_vars, GridLayout, LkfVars,
};
pub use registry::{VarHandle, VarShape, VariableInfo, VariableRegistry};
pub use synthesis::{
    assemble_robust, assemble_synthesis, BetaHandling, GammaSpec, RobustEps, SynthesisOptions,
    SynthesisProblem, SynthesisVars,
};
