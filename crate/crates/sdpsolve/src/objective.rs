//! Linear-objective minimization along the central path.

use lmisynth::{AffineConstraint, LmiProblem, Sense, SparseSym};
use matrixkit::{sym_eig, Matrix};

use crate::blocks::normalize;
use crate::error::SolverError;
use crate::feasibility::{solve_feasibility, solve_feasibility_inner};
use crate::newton::{barrier_derivs, barrier_value, newton_direction};
use crate::options::SolveOptions;
use crate::result::{SolveResult, SolveStatus};
use crate::verify::posthoc_margins;

/// Barrier weight growth per path-following stage.
const TAU_GROWTH: f64 = 10.0;
/// Newton decrement threshold that ends one stage. Centering only has to be
/// loose for the path to stay trackable; the duality gap governs accuracy.
const STAGE_TOL: f64 = 1e-3;
/// Inner iteration cap per stage.
const STAGE_CAP: usize = 60;
/// Armijo slope fraction for backtracking.
const ARMIJO: f64 = 0.25;
/// Backtracking halving cap.
const BACKTRACK_CAP: usize = 70;
/// Relative objective drop that counts as divergence to minus infinity.
const UNBOUNDED_GUARD: f64 = 1e12;
/// Name of the synthetic phase-one constraint that boxes the objective.
const CEILING_NAME: &str = "objective-box";
/// First objective box half-width tried in phase one.
const CEILING_START: f64 = 1.0;
/// Growth factor applied when the box itself blocks feasibility.
const CEILING_GROWTH: f64 = 100.0;
/// Largest box half-width tried before giving up on widening it.
const CEILING_CAP: f64 = 1e10;

/// Minimizes the problem's linear objective by path-following from a
/// strictly feasible point found by the feasibility phase.
///
/// The path-following phase runs on blocks shifted inward by a fraction of
/// the discovered margin, so the returned point keeps a verifiable margin
/// rather than touching the active constraints.
pub fn minimize_objective(
    problem: &LmiProblem,
    opts: &SolveOptions,
) -> Result<SolveResult, SolverError> {
    opts.validate()?;
    let Some(weights) = problem.objective.as_ref() else {
        return Err(SolverError::Assembly("problem carries no objective".into()));
    };
    let n = problem.registry.scalar_count();
    let mut c = vec![0.0; n];
    for (k, w) in weights {
        if *k >= n {
            return Err(SolverError::Assembly(format!(
                "objective addresses scalar {k} beyond the registry"
            )));
        }
        c[*k] += *w;
    }

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    if c.iter().all(|w| *w == 0.0) {
        let mut any_point = solve_feasibility(problem, opts)?;
        if any_point.status == SolveStatus::Feasible {
            any_point.objective = Some(0.0);
        }
        return Ok(any_point);
    }

    let interior_goal = (100.0 * opts.mu_tol).max(1e-4);
    let mut capped = problem.clone();
    let ceiling_slot = capped.constraints.len();
    capped.constraints.push(ceiling_constraint(&c, CEILING_START));
    let mut ceiling = CEILING_START;
    let mut iterations = 0usize;
    let mut log = Vec::new();
    let phase1 = loop {
        capped.constraints[ceiling_slot] = ceiling_constraint(&c, ceiling);
        let mut attempt = solve_feasibility_inner(&capped, opts, Some(interior_goal))?;
        iterations += attempt.iterations;
        log.append(&mut attempt.log);
        if attempt.status == SolveStatus::Feasible {
            break attempt;
        }
        let ceiling_blocks = attempt
            .constraint_margins
            .iter()
            .find(|m| m.name == CEILING_NAME)
            .is_some_and(|m| m.margin <= 0.5 * ceiling);
        if attempt.status == SolveStatus::InfeasibleToMargin
            && ceiling_blocks
            && ceiling < CEILING_CAP
        {
            ceiling *= CEILING_GROWTH;
            continue;
        }
        let (constraint_margins, margin) = posthoc_margins(problem, &attempt.x)?;
        return Ok(SolveResult {
            status: attempt.status,
            x: attempt.x,
            margin,
            constraint_margins,
            iterations,
            objective: None,
            log,
        });
    };

    let blocks = normalize(problem)?;
    let mut x = phase1.x.clone();

    if blocks.is_empty() {
        let (constraint_margins, margin) = posthoc_margins(problem, &x)?;
        return Ok(SolveResult {
            status: SolveStatus::Unbounded,
            x,
            margin,
            constraint_margins,
            iterations,
            objective: Some(dot(&c, &phase1.x)),
            log,
        });
    }

    let mut start_margin = f64::INFINITY;
    for b in &blocks {
        let (vals, _) = sym_eig(&b.eval(&x, 0.0))?;
        start_margin = start_margin.min(*vals.last().expect("block has positive dimension"));
    }
    let shift = (2.0 * opts.mu_tol).min(0.5 * start_margin);

    let nu: f64 = blocks.iter().map(|b| b.dim as f64).sum();
    let scale = 1.0 + dot(&c, &x).abs();
    let mut tau = (nu / scale).max(1.0);
    let gap_target = opts.step_tol.max(1e-9).min(0.5 * opts.mu_tol);
    let mut phase2_iters = 0usize;
    let mut broke_down = false;
    let mut unbounded = false;
    let mut converged = false;

    'outer: loop {
        for _ in 0..STAGE_CAP {
            if phase2_iters >= opts.max_iterations {
                break 'outer;
            }
            let Some(raw) = barrier_derivs(&blocks, &x, shift, n, false) else {
                broke_down = true;
                break 'outer;
            };
            let mut grad = raw.grad;
            for i in 0..n {
                grad[i] += tau * c[i];
            }
            let Some(dir) = newton_direction(&raw.hess, &grad) else {
                broke_down = true;
                break 'outer;
            };
            let slope: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();
            let decrement = 0.5 * (-slope).max(0.0);
            if decrement <= STAGE_TOL {
                break;
            }
            let phi0 = tau * dot(&c, &x) + raw.value;
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..BACKTRACK_CAP {
                let xs: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + alpha * di).collect();
                if let Some(bv) = barrier_value(&blocks, &xs, shift) {
                    let phi = tau * dot(&c, &xs) + bv;
                    if phi <= phi0 + ARMIJO * alpha * slope {
                        x = xs;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            iterations += 1;
            phase2_iters += 1;
            if opts.log_iterations {
                log.push(format!("{iterations},{},{decrement}", dot(&c, &x)));
            }
            if !moved {
                break;
            }
            if dot(&c, &x) <= -UNBOUNDED_GUARD * scale {
                unbounded = true;
                break 'outer;
            }
        }
        if nu / tau <= gap_target {
            converged = true;
            break;
        }
        tau *= TAU_GROWTH;
    }

    let (constraint_margins, margin) = posthoc_margins(problem, &x)?;
    let objective = Some(dot(&c, &x));
    let status = if unbounded {
        SolveStatus::Unbounded
    } else if broke_down || !converged {
        SolveStatus::NumericalFailure
    } else if margin >= opts.mu_tol {
        SolveStatus::Feasible
    } else {
        SolveStatus::InfeasibleToMargin
    };
    Ok(SolveResult {
        status,
        x,
        margin,
        constraint_margins,
        iterations,
        objective,
        log,
    })
}

/// Diagonal block `diag(u - c'x, u + c'x) >= 0` added during phase one;
/// without it the margin maximization drifts along recession directions
/// of the constraint set that move the objective, and hands phase two a
/// useless start far from the optimum.
fn ceiling_constraint(c: &[f64], u: f64) -> AffineConstraint {
    let coeffs = c
        .iter()
        .enumerate()
        .filter(|(_, w)| **w != 0.0)
        .map(|(k, w)| (k, SparseSym::from_dense(&Matrix::from_diag(&[-*w, *w]))))
        .collect();
    AffineConstraint {
        name: CEILING_NAME.into(),
        sense: Sense::PositiveDefinite,
        dim: 2,
        f0: SparseSym::from_dense(&Matrix::from_diag(&[u, u])),
        coeffs,
        tag: "phase-one objective box".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lmisynth::{AffineConstraint, Sense, SparseSym, VarShape, VariableRegistry};
    use matrixkit::Matrix;

    fn min_x_problem(a: Matrix) -> LmiProblem {
        let mut reg = VariableRegistry::new();
        reg.add("x", VarShape::Scalar, false).unwrap();
        let dim = a.rows();
        LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "c".into(),
                sense: Sense::PositiveDefinite,
                dim,
                f0: SparseSym::from_dense(&a.scale(-1.0)),
                coeffs: vec![(0, SparseSym::from_dense(&Matrix::identity(dim)))],
                tag: "t".into(),
            }],
            objective: Some(vec![(0, 1.0)]),
        }
    }

    #[test]
    fn minimum_matches_largest_eigenvalue() {
        let a = Matrix::from_rows(&[vec![1.0, 0.4], vec![0.4, -0.5]]).unwrap();
        let res = minimize_objective(&min_x_problem(a), &SolveOptions::default()).unwrap();
        assert!(res.is_feasible(), "status {:?}", res.status);
        let expected = 0.5 * (0.5 + (1.5f64 * 1.5 + 4.0 * 0.16).sqrt());
        let got = res.objective.unwrap();
        assert!(
            (got - expected).abs() < 1e-5,
            "objective {got} expected {expected}"
        );
    }

    #[test]
    fn schur_bound_recovers_squared_gain() {
        let g = 0.7;
        let mut reg = VariableRegistry::new();
        let h = reg.add("gsq", VarShape::Scalar, true).unwrap();
        let start = reg.scalar_range(h).start;
        let mut f0 = Matrix::zeros(2, 2);
        f0[(0, 0)] = -1.0;
        f0[(0, 1)] = g;
        f0[(1, 0)] = g;
        let mut coeff = Matrix::zeros(2, 2);
        coeff[(1, 1)] = -1.0;
        let problem = LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "schur".into(),
                sense: Sense::NegativeDefinite,
                dim: 2,
                f0: SparseSym::from_dense(&f0),
                coeffs: vec![(start, SparseSym::from_dense(&coeff))],
                tag: "t".into(),
            }],
            objective: Some(vec![(start, 1.0)]),
        };
        let res = minimize_objective(&problem, &SolveOptions::default()).unwrap();
        assert!(res.is_feasible(), "status {:?}", res.status);
        let got = res.objective.unwrap();
        assert!(
            (got - g * g).abs() < 1e-5,
            "objective {got} expected {}",
            g * g
        );
    }

    #[test]
    fn zero_objective_returns_any_feasible_point() {
        let mut problem = min_x_problem(Matrix::from_diag(&[1.0, 2.0]));
        problem.objective = Some(vec![]);
        let res = minimize_objective(&problem, &SolveOptions::default()).unwrap();
        assert!(res.is_feasible());
        assert_eq!(res.objective, Some(0.0));
    }

    #[test]
    fn missing_objective_is_rejected() {
        let mut problem = min_x_problem(Matrix::from_diag(&[1.0]));
        problem.objective = None;
        assert!(matches!(
            minimize_objective(&problem, &SolveOptions::default()),
            Err(SolverError::Assembly(_))
        ));
    }

    #[test]
    fn infeasible_problem_reports_phase_one_outcome() {
        let mut reg = VariableRegistry::new();
        reg.add("x", VarShape::Scalar, false).unwrap();
        let problem = LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "c".into(),
                sense: Sense::PositiveDefinite,
                dim: 1,
                f0: SparseSym::from_dense(&Matrix::from_diag(&[-1.0])),
                coeffs: vec![],
                tag: "t".into(),
            }],
            objective: Some(vec![(0, 1.0)]),
        };
        let res = minimize_objective(&problem, &SolveOptions::default()).unwrap();
        assert_eq!(res.status, SolveStatus::InfeasibleToMargin);
        assert_eq!(res.objective, None);
    }

    #[test]
    fn unbounded_objective_is_flagged() {
        let mut reg = VariableRegistry::new();
        reg.add("x", VarShape::Scalar, false).unwrap();
        let problem = LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "c".into(),
                sense: Sense::PositiveDefinite,
                dim: 1,
                f0: SparseSym::from_dense(&Matrix::from_diag(&[1.0])),
                coeffs: vec![(0, SparseSym::from_dense(&Matrix::from_diag(&[-1.0])))],
                tag: "t".into(),
            }],
            objective: Some(vec![(0, 1.0)]),
        };
        let mut opts = SolveOptions::default();
        opts.max_iterations = 400;
        let res = minimize_objective(&problem, &opts).unwrap();
        assert_eq!(res.status, SolveStatus::Unbounded);
    }
}
