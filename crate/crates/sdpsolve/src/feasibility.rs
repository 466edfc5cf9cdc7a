//! Margin-maximizing feasibility solve.

use lmisynth::LmiProblem;
use matrixkit::sym_eig;

use crate::blocks::normalize;
use crate::error::SolverError;
use crate::newton::{barrier_derivs, barrier_value, newton_direction};
use crate::options::SolveOptions;
use crate::result::{SolveResult, SolveStatus};
use crate::verify::posthoc_margins;

/// Upper cap on the internal margin variable; margins beyond this carry no
/// extra information and the cap keeps the maximization bounded.
const MARGIN_CAP: f64 = 10.0;
/// Box half-width on every scalar variable. The box keeps the barrier
/// subproblems bounded along recession directions of the constraint set;
/// it is far outside the magnitude of any meaningful solution.
const BOX_RADIUS: f64 = 1e9;
/// Smallest barrier weight of the schedule.
const MU_FLOOR: f64 = 1e-10;
/// Newton decrement threshold that ends one barrier stage.
const STAGE_TOL: f64 = 1e-11;
/// Inner iteration cap per barrier stage.
const STAGE_CAP: usize = 60;
/// Armijo slope fraction for backtracking.
const ARMIJO: f64 = 0.25;
/// Backtracking halving cap.
const BACKTRACK_CAP: usize = 70;

/// Maximizes the common slack margin `t` subject to `G_c(x) - t I` staying
/// positive definite for every block, then verifies the best point with
/// independent eigenvalue checks; the verification verdict is authoritative.
pub fn solve_feasibility(
    problem: &LmiProblem,
    opts: &SolveOptions,
) -> Result<SolveResult, SolverError> {
    solve_feasibility_inner(problem, opts, None)
}

/// Margin maximization with an optional early stop once the margin clears
/// `early_margin`. The minimization phase uses the early stop: it only needs
/// a strictly interior point, and chasing the maximal margin lets weakly
/// constrained variables (such as the squared attenuation level) drift far
/// from useful values.
pub(crate) fn solve_feasibility_inner(
    problem: &LmiProblem,
    opts: &SolveOptions,
    early_margin: Option<f64>,
) -> Result<SolveResult, SolverError> {
    opts.validate()?;
    let n = problem.registry.scalar_count();
    if n == 0 {
        return Err(SolverError::Assembly(
            "problem has no decision variables".into(),
        ));
    }
    let blocks = normalize(problem)?;
    let mut x = vec![0.0; n];
    let mut log = Vec::new();
    let mut iterations = 0usize;
    let mut broke_down = false;

    if blocks.is_empty() {
        let (constraint_margins, margin) = posthoc_margins(problem, &x)?;
        return Ok(SolveResult {
            status: SolveStatus::Feasible,
            x,
            margin,
            constraint_margins,
            iterations,
            objective: None,
            log,
        });
    }

    let mut t = MARGIN_CAP - 1.0;
    let mut start_margin = f64::INFINITY;
    for b in &blocks {
        let (vals, _) = sym_eig(&b.eval(&x, 0.0))?;
        let lmin = *vals.last().expect("block has positive dimension");
        start_margin = start_margin.min(lmin);
        t = t.min(lmin - 1.0);
    }
    let goal_reached =
        |t_now: f64| early_margin.is_some_and(|goal| t_now >= goal);
    let skip_iteration = goal_reached(start_margin);

    let nu: f64 = blocks.iter().map(|b| b.dim as f64).sum();
    let mut mu = opts.barrier_start / (1.0 + nu);
    'outer: while !skip_iteration {
        for _ in 0..STAGE_CAP {
            if iterations >= opts.max_iterations {
                break 'outer;
            }
            let Some(raw) = barrier_derivs(&blocks, &x, t, n, true) else {
                broke_down = true;
                break 'outer;
            };
            let gap = MARGIN_CAP - t;
            let mut grad: Vec<f64> = raw.grad.iter().map(|g| mu * g).collect();
            grad[n] += mu / gap - 1.0;
            let mut hess = raw.hess.scale(mu);
            hess[(n, n)] += mu / (gap * gap);
            for k in 0..n {
                let above = BOX_RADIUS - x[k];
                let below = BOX_RADIUS + x[k];
                grad[k] += mu * (1.0 / above - 1.0 / below);
                hess[(k, k)] += mu * (1.0 / (above * above) + 1.0 / (below * below));
            }
            let Some(dir) = newton_direction(&hess, &grad) else {
                broke_down = true;
                break 'outer;
            };
            let slope: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();
            let decrement = 0.5 * (-slope).max(0.0);
            if decrement <= STAGE_TOL {
                break;
            }
            let phi0 = -t + mu * (raw.value + box_value(&x).expect("iterate stays inside the box"))
                - mu * gap.ln();
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..BACKTRACK_CAP {
                let xs: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + alpha * di).collect();
                let ts = t + alpha * dir[n];
                if ts < MARGIN_CAP {
                    if let (Some(bv), Some(bx)) = (barrier_value(&blocks, &xs, ts), box_value(&xs))
                    {
                        let phi = -ts + mu * (bv + bx) - mu * (MARGIN_CAP - ts).ln();
                        if phi <= phi0 + ARMIJO * alpha * slope {
                            x = xs;
                            t = ts;
                            moved = true;
                            break;
                        }
                    }
                }
                alpha *= 0.5;
            }
            iterations += 1;
            if opts.log_iterations {
                log.push(format!("{iterations},{t},{decrement}"));
            }
            if goal_reached(t) {
                break 'outer;
            }
            if !moved {
                break;
            }
        }
        if mu <= MU_FLOOR {
            break;
        }
        mu = (mu * opts.barrier_shrink).max(MU_FLOOR);
    }

    let (constraint_margins, margin) = posthoc_margins(problem, &x)?;
    let status = if margin >= opts.mu_tol {
        SolveStatus::Feasible
    } else if broke_down || iterations >= opts.max_iterations {
        SolveStatus::NumericalFailure
    } else {
        SolveStatus::InfeasibleToMargin
    };
    Ok(SolveResult {
        status,
        x,
        margin,
        constraint_margins,
        iterations,
        objective: None,
        log,
    })
}

/// Barrier value of the variable box, `None` once any coordinate escapes.
fn box_value(x: &[f64]) -> Option<f64> {
    let mut v = 0.0;
    for &xi in x {
        let above = BOX_RADIUS - xi;
        let below = BOX_RADIUS + xi;
        if above <= 0.0 || below <= 0.0 {
            return None;
        }
        v -= above.ln() + below.ln();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lmisynth::{AffineConstraint, Sense, SparseSym, VarShape, VariableRegistry};
    use matrixkit::Matrix;

    fn scalar_problem(f0: Matrix, coeff: Matrix, sense: Sense) -> LmiProblem {
        let mut reg = VariableRegistry::new();
        reg.add("x", VarShape::Scalar, false).unwrap();
        let dim = f0.rows();
        LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "c".into(),
                sense,
                dim,
                f0: SparseSym::from_dense(&f0),
                coeffs: vec![(0, SparseSym::from_dense(&coeff))],
                tag: "t".into(),
            }],
            objective: None,
        }
    }

    #[test]
    fn scaled_identity_threshold_is_cleared() {
        let problem = scalar_problem(
            Matrix::from_diag(&[-1.0, -2.0]),
            Matrix::identity(2),
            Sense::PositiveDefinite,
        );
        let opts = SolveOptions::default();
        let res = solve_feasibility(&problem, &opts).unwrap();
        assert!(res.is_feasible(), "status {:?}", res.status);
        assert!(res.x[0] >= 2.0 + opts.mu_tol, "x = {}", res.x[0]);
        assert!((res.margin - (res.x[0] - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn off_diagonal_coupling_threshold_is_cleared() {
        let mut coupling = Matrix::zeros(2, 2);
        coupling[(0, 1)] = 1.0;
        coupling[(1, 0)] = 1.0;
        let problem = scalar_problem(coupling, Matrix::identity(2), Sense::PositiveDefinite);
        let res = solve_feasibility(&problem, &SolveOptions::default()).unwrap();
        assert!(res.is_feasible());
        assert!(res.x[0] > 1.0, "x = {}", res.x[0]);
    }

    #[test]
    fn constant_negative_identity_cannot_be_made_positive() {
        let problem = scalar_problem(
            Matrix::from_diag(&[-1.0, -1.0]),
            Matrix::zeros(2, 2),
            Sense::PositiveDefinite,
        );
        let res = solve_feasibility(&problem, &SolveOptions::default()).unwrap();
        assert_eq!(res.status, SolveStatus::InfeasibleToMargin);
        assert!((res.margin + 1.0).abs() < 1e-6, "margin {}", res.margin);
    }

    #[test]
    fn iteration_log_is_recorded_on_request() {
        let problem = scalar_problem(
            Matrix::from_diag(&[-1.0]),
            Matrix::identity(1),
            Sense::PositiveDefinite,
        );
        let mut opts = SolveOptions::default();
        opts.log_iterations = true;
        let res = solve_feasibility(&problem, &opts).unwrap();
        assert_eq!(res.log.len(), res.iterations);
        let first: Vec<&str> = res.log[0].split(',').collect();
        assert_eq!(first.len(), 3);
        first[1].parse::<f64>().unwrap();
        first[2].parse::<f64>().unwrap();
    }

    #[test]
    fn runs_are_bitwise_deterministic() {
        let problem = scalar_problem(
            Matrix::from_diag(&[-1.0, -2.0, 0.5]),
            Matrix::identity(3),
            Sense::PositiveDefinite,
        );
        let opts = SolveOptions::default();
        let a = solve_feasibility(&problem, &opts).unwrap();
        let b = solve_feasibility(&problem, &opts).unwrap();
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.status, b.status);
        assert_eq!(a.x[0].to_bits(), b.x[0].to_bits());
        assert_eq!(a.margin.to_bits(), b.margin.to_bits());
    }
}
