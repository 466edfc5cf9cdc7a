//! Scalar searches wrapping the feasibility oracle.

use lmisynth::LmiProblem;
use rayon::prelude::*;

use crate::error::SolverError;
use crate::feasibility::solve_feasibility;
use crate::options::SolveOptions;
use crate::result::SolveResult;

/// Doubling cap while hunting for a feasible upper gamma.
const MAX_EXPANSIONS: usize = 20;

/// Outcome of a gamma bisection.
#[derive(Debug, Clone)]
pub struct GammaSearch {
    /// Smallest feasible gamma located by the bisection.
    pub gamma: f64,
    /// Solve result at that gamma.
    pub result: SolveResult,
    /// Every probed gamma with its feasibility verdict, in probe order.
    pub probes: Vec<(f64, bool)>,
    /// Set when some larger probed gamma came back infeasible while a
    /// smaller one was feasible.
    pub monotonicity_warning: Option<String>,
}

/// Bisects the attenuation level using feasibility solves as the oracle.
///
/// The upper bracket end is doubled until feasible (up to a cap); the lower
/// end is assumed infeasible and never probed. Terminates once the bracket
/// width relative to its upper end drops below `rel_tol`.
pub fn min_gamma<F>(
    mut assemble: F,
    bracket: (f64, f64),
    rel_tol: f64,
    opts: &SolveOptions,
) -> Result<GammaSearch, SolverError>
where
    F: FnMut(f64) -> Result<LmiProblem, SolverError>,
{
    opts.validate()?;
    if !(rel_tol > 0.0) || !rel_tol.is_finite() {
        return Err(SolverError::BadOptions(format!(
            "rel_tol must be positive and finite, got {rel_tol}"
        )));
    }
    let (mut lo, mut hi) = bracket;
    if !(lo >= 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(SolverError::BadOptions(format!(
            "gamma bracket must satisfy 0 <= lo < hi, got ({lo}, {hi})"
        )));
    }

    let mut probes: Vec<(f64, bool)> = Vec::new();
    let mut best: Option<(f64, SolveResult)> = None;
    for _ in 0..=MAX_EXPANSIONS {
        let problem = assemble(hi)?;
        let result = solve_feasibility(&problem, opts)?;
        let ok = result.is_feasible();
        probes.push((hi, ok));
        if ok {
            best = Some((hi, result));
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if best.is_none() {
        return Err(SolverError::BracketFailure { last_gamma: lo });
    }

    while (hi - lo) / hi > rel_tol {
        let mid = 0.5 * (lo + hi);
        let problem = assemble(mid)?;
        let result = solve_feasibility(&problem, opts)?;
        let ok = result.is_feasible();
        probes.push((mid, ok));
        if ok {
            hi = mid;
            best = Some((mid, result));
        } else {
            lo = mid;
        }
    }

    let mut monotonicity_warning = None;
    for &(g1, ok1) in &probes {
        if !ok1 {
            continue;
        }
        for &(g2, ok2) in &probes {
            if !ok2 && g2 > g1 {
                monotonicity_warning = Some(format!(
                    "feasible at gamma = {g1} but infeasible at larger gamma = {g2}"
                ));
            }
        }
    }
    let (gamma, result) = best.expect("a feasible gamma was recorded");
    Ok(GammaSearch {
        gamma,
        result,
        probes,
        monotonicity_warning,
    })
}

/// Outcome of an epsilon grid sweep.
#[derive(Debug, Clone)]
pub struct EpsSearch {
    /// First certificate multiplier of the selected pair.
    pub eps1: f64,
    /// Second certificate multiplier of the selected pair.
    pub eps2: f64,
    /// Solve result at the selected pair.
    pub result: SolveResult,
}

/// Log-spaced default grid, five points per decade ranging 1e-2 to 1e2.
pub fn default_eps_grid() -> Vec<(f64, f64)> {
    let pts = [1e-2, 1e-1, 1.0, 1e1, 1e2];
    let mut out = Vec::with_capacity(pts.len() * pts.len());
    for &a in &pts {
        for &b in &pts {
            out.push((a, b));
        }
    }
    out
}

/// Sweeps multiplier pairs in batches sized to the worker pool and stops
/// after the first batch that yields a feasible pair, returning the best
/// record evaluated: feasible before infeasible, then larger post-hoc
/// margin, then smaller `eps1` and `eps2`.
///
/// When every pair is infeasible the whole grid is evaluated and the
/// best-margin infeasible record is returned rather than an error.
pub fn eps_grid_search<F>(
    assemble: F,
    grid: &[(f64, f64)],
    opts: &SolveOptions,
) -> Result<EpsSearch, SolverError>
where
    F: Fn(f64, f64) -> Result<LmiProblem, SolverError> + Sync,
{
    opts.validate()?;
    if grid.is_empty() {
        return Err(SolverError::BadOptions("epsilon grid is empty".into()));
    }
    if let Some(&(a, b)) = grid.iter().find(|&&(a, b)| !(a > 0.0) || !(b > 0.0)) {
        return Err(SolverError::BadOptions(format!(
            "epsilon grid entries must be positive, got ({a}, {b})"
        )));
    }
    let batch = rayon::current_num_threads().max(1);
    let mut best: Option<EpsSearch> = None;
    for chunk in grid.chunks(batch) {
        let solved: Result<Vec<EpsSearch>, SolverError> = chunk
            .par_iter()
            .map(|&(eps1, eps2)| {
                let problem = assemble(eps1, eps2)?;
                let result = solve_feasibility(&problem, opts)?;
                Ok(EpsSearch { eps1, eps2, result })
            })
            .collect();
        for rec in solved? {
            let replace = match &best {
                None => true,
                Some(cur) => preferred(&rec, cur),
            };
            if replace {
                best = Some(rec);
            }
        }
        if best.as_ref().is_some_and(|b| b.result.is_feasible()) {
            break;
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// Strict preference order: feasibility, then margin, then smaller
/// multipliers.
fn preferred(a: &EpsSearch, b: &EpsSearch) -> bool {
    let (fa, fb) = (a.result.is_feasible(), b.result.is_feasible());
    if fa != fb {
        return fa;
    }
    if a.result.margin != b.result.margin {
        return a.result.margin > b.result.margin;
    }
    if a.eps1 != b.eps1 {
        return a.eps1 < b.eps1;
    }
    a.eps2 < b.eps2
}

#[cfg(test)]
mod tests {
    use super::*;
    use lmisynth::{AffineConstraint, Sense, SparseSym, VarShape, VariableRegistry};
    use matrixkit::Matrix;

    /// Problem that is feasible exactly when `level > 0`, with post-hoc
    /// margin equal to `level`.
    fn leveled_problem(level: f64) -> LmiProblem {
        let mut reg = VariableRegistry::new();
        reg.add("slack", VarShape::Scalar, false).unwrap();
        LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "level".into(),
                sense: Sense::PositiveDefinite,
                dim: 1,
                f0: SparseSym::from_dense(&Matrix::from_diag(&[level])),
                coeffs: vec![],
                tag: "t".into(),
            }],
            objective: None,
        }
    }

    #[test]
    fn bisection_brackets_synthetic_threshold() {
        let search = min_gamma(
            |g| Ok(leveled_problem(g - 0.37)),
            (0.0, 1.0),
            1e-3,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(
            search.gamma >= 0.37 && search.gamma <= 0.3704,
            "gamma {}",
            search.gamma
        );
        assert!(search.result.is_feasible());
        assert!(search.monotonicity_warning.is_none());
        assert!(search.probes.len() > 5);
    }

    #[test]
    fn upper_bracket_expands_until_feasible() {
        let search = min_gamma(
            |g| Ok(leveled_problem(g - 3.0)),
            (0.0, 0.5),
            1e-3,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!((search.gamma - 3.0) / 3.0 < 2e-3, "gamma {}", search.gamma);
        assert!(search.probes.iter().filter(|(_, ok)| !ok).count() >= 3);
    }

    #[test]
    fn hopeless_bracket_reports_failure() {
        let err = min_gamma(
            |_| Ok(leveled_problem(-1.0)),
            (0.0, 1.0),
            1e-3,
            &SolveOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, SolverError::BracketFailure { .. }));
    }

    #[test]
    fn degenerate_brackets_are_rejected() {
        let opts = SolveOptions::default();
        assert!(min_gamma(|g| Ok(leveled_problem(g)), (1.0, 0.5), 1e-3, &opts).is_err());
        assert!(min_gamma(|g| Ok(leveled_problem(g)), (0.0, 1.0), 0.0, &opts).is_err());
    }

    #[test]
    fn grid_picks_largest_margin() {
        let grid = default_eps_grid();
        assert_eq!(grid.len(), 25);
        let best = eps_grid_search(
            |e1, e2| Ok(leveled_problem(1.0 / (e1 + e2))),
            &grid,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!((best.eps1, best.eps2), (1e-2, 1e-2));
        assert!(best.result.is_feasible());
    }

    #[test]
    fn grid_ties_break_toward_smaller_multipliers() {
        let best = eps_grid_search(
            |_, _| Ok(leveled_problem(1.0)),
            &default_eps_grid(),
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!((best.eps1, best.eps2), (1e-2, 1e-2));
    }

    #[test]
    fn all_infeasible_grid_returns_best_margin_pair() {
        let best = eps_grid_search(
            |e1, e2| Ok(leveled_problem(-e1 - e2)),
            &default_eps_grid(),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(!best.result.is_feasible());
        assert_eq!((best.eps1, best.eps2), (1e-2, 1e-2));
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let opts = SolveOptions::default();
        assert!(eps_grid_search(|_, _| Ok(leveled_problem(1.0)), &[], &opts).is_err());
        assert!(
            eps_grid_search(|_, _| Ok(leveled_problem(1.0)), &[(0.0, 1.0)], &opts).is_err()
        );
    }
}
