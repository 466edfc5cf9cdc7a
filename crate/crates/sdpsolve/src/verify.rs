//! Independent post-hoc margin verification.

use lmisynth::{LmiProblem, Sense};
use matrixkit::{sym_eig, SymmetricMatrix};

use crate::error::SolverError;
use crate::result::ConstraintMargin;

/// Evaluates every constraint and bound at a point through dense
/// eigenvalue decompositions, sharing nothing with the barrier iteration.
pub(crate) fn posthoc_margins(
    problem: &LmiProblem,
    x: &[f64],
) -> Result<(Vec<ConstraintMargin>, f64), SolverError> {
    let mut list = Vec::new();
    let mut worst = f64::INFINITY;
    for c in &problem.constraints {
        let margin = match c.sense {
            Sense::Zero => continue,
            Sense::NegativeDefinite => {
                let (vals, _) = sym_eig(&c.value_at(x))?;
                -vals[0]
            }
            Sense::PositiveDefinite => {
                let (vals, _) = sym_eig(&c.value_at(x))?;
                *vals.last().expect("constraint has positive dimension")
            }
        };
        worst = worst.min(margin);
        list.push(ConstraintMargin {
            name: c.name.clone(),
            margin,
        });
    }
    for (h, info) in problem.registry.iter() {
        if !info.psd_required {
            continue;
        }
        let value = problem.registry.materialize(h, x);
        let (vals, _) = sym_eig(&SymmetricMatrix::symmetrize(&value))?;
        let margin = *vals.last().expect("variable has positive dimension");
        worst = worst.min(margin);
        list.push(ConstraintMargin {
            name: format!("bound:{}", info.name),
            margin,
        });
    }
    Ok((list, worst))
}
