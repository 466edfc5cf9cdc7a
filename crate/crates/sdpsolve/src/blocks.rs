//! Sign-normalized constraint blocks consumed by the barrier iteration.

use lmisynth::{LmiProblem, Sense, VarShape, VariableInfo};
use matrixkit::SymmetricMatrix;

use crate::error::SolverError;

/// Residual tolerance on structural equality audits carried in a problem.
const AUDIT_TOL: f64 = 1e-10;

/// One constraint in `G(x) = G0 + sum_k x_k G_k` positive-definite
/// orientation.
pub(crate) struct Block {
    pub dim: usize,
    pub g0: SymmetricMatrix,
    /// Signed lower-triangle triplets per active scalar index, sorted by
    /// index; off-diagonal triplets stand for a mirrored pair.
    pub coeffs: Vec<(usize, Vec<(usize, usize, f64)>)>,
}

impl Block {
    /// Evaluates `G(x) - shift * I`.
    pub fn eval(&self, x: &[f64], shift: f64) -> SymmetricMatrix {
        let mut s = self.g0.clone();
        for (k, entries) in &self.coeffs {
            let xk = x[*k];
            if xk != 0.0 {
                for &(r, c, v) in entries {
                    s.add_to(r, c, xk * v);
                }
            }
        }
        if shift != 0.0 {
            for i in 0..self.dim {
                s.add_to(i, i, -shift);
            }
        }
        s
    }
}

/// Converts every definite constraint and semidefinite variable bound into a
/// `G(x)` block. Equality audits must cancel structurally and are skipped.
pub(crate) fn normalize(problem: &LmiProblem) -> Result<Vec<Block>, SolverError> {
    let n = problem.registry.scalar_count();
    let mut out = Vec::new();
    for c in &problem.constraints {
        let sign = match c.sense {
            Sense::Zero => {
                let worst = c.f0.max_abs().max(c.coeff_max_abs());
                if worst > AUDIT_TOL {
                    return Err(SolverError::Assembly(format!(
                        "equality audit {} has residual entries up to {worst:e}",
                        c.name
                    )));
                }
                continue;
            }
            Sense::NegativeDefinite => -1.0,
            Sense::PositiveDefinite => 1.0,
        };
        let mut g0 = SymmetricMatrix::zeros(c.dim);
        c.f0.add_to(&mut g0, sign);
        let mut coeffs = Vec::with_capacity(c.coeffs.len());
        for (k, sp) in &c.coeffs {
            if *k >= n {
                return Err(SolverError::Assembly(format!(
                    "constraint {} addresses scalar {k} beyond the registry",
                    c.name
                )));
            }
            let entries = sp
                .entries()
                .iter()
                .map(|&(r, col, v)| (r as usize, col as usize, sign * v))
                .collect();
            coeffs.push((*k, entries));
        }
        out.push(Block {
            dim: c.dim,
            g0,
            coeffs,
        });
    }
    for (_, info) in problem.registry.iter() {
        if !info.psd_required {
            continue;
        }
        out.push(bound_block(info)?);
    }
    Ok(out)
}

/// Builds the semidefinite bound block of one flagged variable.
fn bound_block(info: &VariableInfo) -> Result<Block, SolverError> {
    let base = info.offset;
    let (dim, coeffs) = match info.shape {
        VarShape::Symmetric(n) => {
            let mut coeffs = Vec::with_capacity(n * (n + 1) / 2);
            let mut k = 0;
            for i in 0..n {
                for j in 0..=i {
                    coeffs.push((base + k, vec![(i, j, 1.0)]));
                    k += 1;
                }
            }
            (n, coeffs)
        }
        VarShape::Diagonal(n) => (
            n,
            (0..n).map(|k| (base + k, vec![(k, k, 1.0)])).collect(),
        ),
        VarShape::Scalar => (1, vec![(base, vec![(0, 0, 1.0)])]),
        VarShape::General(_, _) => {
            return Err(SolverError::Assembly(format!(
                "variable {} is rectangular and cannot carry a bound",
                info.name
            )));
        }
    };
    Ok(Block {
        dim,
        g0: SymmetricMatrix::zeros(dim),
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lmisynth::{AffineConstraint, SparseSym, VariableRegistry};
    use matrixkit::Matrix;

    fn registry_with_scalar() -> VariableRegistry {
        let mut reg = VariableRegistry::new();
        reg.add("x", VarShape::Scalar, false).unwrap();
        reg
    }

    #[test]
    fn negative_sense_flips_signs() {
        let reg = registry_with_scalar();
        let f0 = SparseSym::from_dense(&Matrix::from_diag(&[2.0, -3.0]));
        let coeff = SparseSym::from_dense(&Matrix::from_diag(&[1.0, 1.0]));
        let problem = LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "c".into(),
                sense: Sense::NegativeDefinite,
                dim: 2,
                f0,
                coeffs: vec![(0, coeff)],
                tag: "t".into(),
            }],
            objective: None,
        };
        let blocks = normalize(&problem).unwrap();
        assert_eq!(blocks.len(), 1);
        let s = blocks[0].eval(&[0.5], 0.0);
        assert_eq!(s.get(0, 0), -2.5);
        assert_eq!(s.get(1, 1), 2.5);
    }

    #[test]
    fn bound_blocks_cover_flagged_variables() {
        let mut reg = VariableRegistry::new();
        reg.add("q", VarShape::Symmetric(2), true).unwrap();
        reg.add("d", VarShape::Diagonal(2), true).unwrap();
        reg.add("s", VarShape::Scalar, true).unwrap();
        let problem = LmiProblem {
            registry: reg,
            constraints: vec![],
            objective: None,
        };
        let blocks = normalize(&problem).unwrap();
        let dims: Vec<usize> = blocks.iter().map(|b| b.dim).collect();
        assert_eq!(dims, [2, 2, 1]);

        let x = [1.0, 0.25, 2.0, 3.0, 4.0, 5.0];
        let q = blocks[0].eval(&x, 0.0);
        assert_eq!(q.get(0, 0), 1.0);
        assert_eq!(q.get(1, 0), 0.25);
        assert_eq!(q.get(0, 1), 0.25);
        assert_eq!(q.get(1, 1), 2.0);
        let d = blocks[1].eval(&x, 0.0);
        assert_eq!(d.get(0, 0), 3.0);
        assert_eq!(d.get(1, 1), 4.0);
        assert_eq!(d.get(1, 0), 0.0);
        let s = blocks[2].eval(&x, 1.5);
        assert_eq!(s.get(0, 0), 3.5);
    }

    #[test]
    fn dirty_equality_audit_is_rejected() {
        let reg = registry_with_scalar();
        let f0 = SparseSym::from_dense(&Matrix::from_diag(&[1e-6]));
        let problem = LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "audit".into(),
                sense: Sense::Zero,
                dim: 1,
                f0,
                coeffs: vec![],
                tag: "t".into(),
            }],
            objective: None,
        };
        assert!(matches!(
            normalize(&problem),
            Err(SolverError::Assembly(_))
        ));
    }

    #[test]
    fn clean_equality_audit_is_skipped() {
        let reg = registry_with_scalar();
        let problem = LmiProblem {
            registry: reg,
            constraints: vec![AffineConstraint {
                name: "audit".into(),
                sense: Sense::Zero,
                dim: 3,
                f0: SparseSym::from_dense(&Matrix::zeros(3, 3)),
                coeffs: vec![],
                tag: "t".into(),
            }],
            objective: None,
        };
        assert!(normalize(&problem).unwrap().is_empty());
    }
}
