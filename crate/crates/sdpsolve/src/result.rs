//! Solve outcome types.

/// Final classification of one solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Independent eigenvalue checks cleared the margin tolerance.
    Feasible,
    /// The iteration converged but the best margin stays below tolerance.
    InfeasibleToMargin,
    /// The iteration cap or a numerical breakdown stopped the solve early.
    NumericalFailure,
    /// The objective decreased past the divergence guard.
    Unbounded,
}

/// Post-hoc margin of a single constraint or variable bound.
#[derive(Debug, Clone)]
pub struct ConstraintMargin {
    /// Constraint name, or `bound:<var>` for a semidefinite variable bound.
    pub name: String,
    /// Smallest slack eigenvalue, sign-adjusted so positive means satisfied.
    pub margin: f64,
}

/// Outcome of a feasibility or minimization run.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Verdict after post-hoc verification.
    pub status: SolveStatus,
    /// Best scalar decision vector found.
    pub x: Vec<f64>,
    /// Smallest post-hoc margin across all constraints and bounds.
    pub margin: f64,
    /// Per-constraint post-hoc margins. Structural equality audits are
    /// checked during normalization and not listed here.
    pub constraint_margins: Vec<ConstraintMargin>,
    /// Newton iterations spent across all phases.
    pub iterations: usize,
    /// Objective value at `x` when the problem carries one.
    pub objective: Option<f64>,
    /// CSV lines `step,margin,decrement` when logging was requested. During
    /// objective minimization the margin column carries the running
    /// objective value instead.
    pub log: Vec<String>,
}

impl SolveResult {
    /// Whether the post-hoc verification accepted the point.
    pub fn is_feasible(&self) -> bool {
        self.status == SolveStatus::Feasible
    }
}
