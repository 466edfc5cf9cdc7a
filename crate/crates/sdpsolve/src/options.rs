//! Solver tuning knobs.

use crate::error::SolverError;

/// Tolerances and iteration limits for one solve.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Post-hoc eigenvalue margin a point must clear to count as feasible.
    pub mu_tol: f64,
    /// Step and duality-gap tolerance governing termination accuracy.
    pub step_tol: f64,
    /// Newton iteration cap per solve phase.
    pub max_iterations: usize,
    /// Initial barrier weight of the feasibility phase, scaled internally
    /// by the total constraint dimension.
    pub barrier_start: f64,
    /// Multiplicative barrier reduction per outer stage, in (0, 1).
    pub barrier_shrink: f64,
    /// Whether to record per-iteration CSV log lines.
    pub log_iterations: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mu_tol: 1e-7,
            step_tol: 1e-8,
            max_iterations: 600,
            barrier_start: 1.0,
            barrier_shrink: 0.2,
            log_iterations: false,
        }
    }
}

impl SolveOptions {
    /// Rejects non-positive tolerances and degenerate schedules.
    pub fn validate(&self) -> Result<(), SolverError> {
        let positive = [
            ("mu_tol", self.mu_tol),
            ("step_tol", self.step_tol),
            ("barrier_start", self.barrier_start),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SolverError::BadOptions(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.barrier_shrink > 0.0 && self.barrier_shrink < 1.0) {
            return Err(SolverError::BadOptions(format!(
                "barrier_shrink must lie in (0, 1), got {}",
                self.barrier_shrink
            )));
        }
        if self.max_iterations == 0 {
            return Err(SolverError::BadOptions(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass_validation() {
        SolveOptions::default().validate().unwrap();
    }

    #[test]
    fn bad_tolerances_are_rejected() {
        let mut opts = SolveOptions::default();
        opts.mu_tol = 0.0;
        assert!(opts.validate().is_err());

        let mut opts = SolveOptions::default();
        opts.barrier_shrink = 1.0;
        assert!(opts.validate().is_err());

        let mut opts = SolveOptions::default();
        opts.max_iterations = 0;
        assert!(opts.validate().is_err());
    }
}
