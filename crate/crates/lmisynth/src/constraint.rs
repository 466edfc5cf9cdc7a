//! Affine matrix constraints and the assembled problem container.
//!
//! A constraint is `F_0 + sum_k x_k F_k` compared against zero in a definite
//! sense. Coefficients are stored as sparse symmetric matrices (lower
//! triangle triplets) keyed by flat scalar index, which keeps the solver's
//! inner products cheap and makes symmetry a representation invariant.

use crate::error::SynthError;
use crate::registry::VariableRegistry;
use matrixkit::{Matrix, SymmetricMatrix};

/// Definite sense of a matrix constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// Matrix must be negative definite.
    NegativeDefinite,
    /// Matrix must be positive definite (semidefinite targets share this sense).
    PositiveDefinite,
    /// Matrix must vanish identically; used for structural equality audits.
    Zero,
}

/// Sparse symmetric matrix stored as strict lower-triangle-or-diagonal triplets.
#[derive(Debug, Clone)]
pub struct SparseSym {
    dim: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl SparseSym {
    /// Builds from a dense symmetric matrix, keeping nonzero lower entries.
    pub fn from_dense(m: &Matrix) -> Self {
        assert_eq!(m.rows(), m.cols(), "SparseSym needs a square matrix");
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for j in 0..=i {
                let v = m[(i, j)];
                if v != 0.0 {
                    entries.push((i as u32, j as u32, v));
                }
            }
        }
        Self { dim: m.rows(), entries }
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored lower-triangle entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Stored triplets (row, col, value) with row >= col.
    pub fn entries(&self) -> &[(u32, u32, f64)] {
        &self.entries
    }

    /// Adds `scale` times this matrix onto a packed symmetric accumulator.
    pub fn add_to(&self, target: &mut SymmetricMatrix, scale: f64) {
        for &(r, c, v) in &self.entries {
            target.add_to(r as usize, c as usize, scale * v);
        }
    }

    /// Densifies to a full symmetric matrix.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r as usize, c as usize)] = v;
            if r != c {
                m[(c as usize, r as usize)] = v;
            }
        }
        m
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, &(_, _, v)| acc.max(v.abs()))
    }

    /// Frobenius norm, counting mirrored off-diagonal entries twice.
    pub fn norm_fro(&self) -> f64 {
        let mut s = 0.0;
        for &(r, c, v) in &self.entries {
            s += if r == c { v * v } else { 2.0 * v * v };
        }
        s.sqrt()
    }
}

/// One affine matrix inequality or equality audit.
#[derive(Debug, Clone)]
pub struct AffineConstraint {
    /// Human-readable constraint name, unique within a problem.
    pub name: String,
    /// Definite sense the affine expression is compared in.
    pub sense: Sense,
    /// Matrix dimension of the constraint.
    pub dim: usize,
    /// Constant term.
    pub f0: SparseSym,
    /// Coefficient per scalar decision index, sorted by index.
    pub coeffs: Vec<(usize, SparseSym)>,
    /// Short machine-readable category tag.
    pub tag: String,
}

impl AffineConstraint {
    /// Evaluates `F_0 + sum_k x_k F_k` at a point.
    pub fn value_at(&self, x: &[f64]) -> SymmetricMatrix {
        let mut acc = SymmetricMatrix::zeros(self.dim);
        self.f0.add_to(&mut acc, 1.0);
        for (idx, coeff) in &self.coeffs {
            let xi = x[*idx];
            if xi != 0.0 {
                coeff.add_to(&mut acc, xi);
            }
        }
        acc
    }

    /// Largest absolute coefficient entry across all variable terms.
    pub fn coeff_max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, (_, c)| acc.max(c.max_abs()))
    }

    /// Total stored nonzeros across constant and coefficients.
    pub fn nnz(&self) -> usize {
        self.f0.nnz() + self.coeffs.iter().map(|(_, c)| c.nnz()).sum::<usize>()
    }
}

/// A complete assembled problem: registry, constraints, optional objective.
#[derive(Debug, Clone)]
pub struct LmiProblem {
    pub registry: VariableRegistry,
    pub constraints: Vec<AffineConstraint>,
    /// Linear objective as sparse (scalar index, weight) terms, minimized.
    pub objective: Option<Vec<(usize, f64)>>,
}

impl LmiProblem {
    /// Creates a problem over a registry with no constraints yet.
    pub fn new(registry: VariableRegistry) -> Self {
        Self { registry, constraints: Vec::new(), objective: None }
    }

    /// Appends a constraint, enforcing name uniqueness.
    pub fn push(&mut self, c: AffineConstraint) -> Result<(), SynthError> {
        if self.constraints.iter().any(|e| e.name == c.name) {
            return Err(SynthError::InvalidParameter(format!(
                "constraint name `{}` is already used",
                c.name
            )));
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Number of scalar decision variables.
    pub fn scalar_count(&self) -> usize {
        self.registry.scalar_count()
    }

    /// Writes a plain-text dump of every constraint: name, size, tag, and the
    /// sparse coefficient triplets, suitable for diffing two assemblies.
    pub fn dump(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "problem: {} scalar variables, {} constraints",
            self.scalar_count(),
            self.constraints.len()
        );
        for c in &self.constraints {
            let sense = match c.sense {
                Sense::NegativeDefinite => "< 0",
                Sense::PositiveDefinite => "> 0",
                Sense::Zero => "= 0",
            };
            let _ = writeln!(out, "constraint {} [{}] dim {} sense {}", c.name, c.tag, c.dim, sense);
            for &(r, col, v) in c.f0.entries() {
                let _ = writeln!(out, "  const ({r},{col}) {v:.17e}");
            }
            for (idx, coeff) in &c.coeffs {
                for &(r, col, v) in coeff.entries() {
                    let _ = writeln!(out, "  x[{idx}] ({r},{col}) {v:.17e}");
                }
            }
        }
        out
    }
}

/// Per-constraint entry of a dimension audit.
#[derive(Debug, Clone)]
pub struct AuditEntry {
    pub name: String,
    pub tag: String,
    pub dim: usize,
    pub nnz: usize,
    pub vars_touched: usize,
}

/// Structural summary of an assembled problem.
#[derive(Debug, Clone)]
pub struct DimensionAudit {
    pub scalar_count: usize,
    pub constraint_count: usize,
    pub entries: Vec<AuditEntry>,
    pub max_dim: usize,
}

/// Audits a problem: sizes, nonzeros, and touched-variable counts per
/// constraint. Empty problems produce an empty audit rather than an error.
pub fn dimension_audit(problem: &LmiProblem) -> DimensionAudit {
    let entries: Vec<AuditEntry> = problem
        .constraints
        .iter()
        .map(|c| AuditEntry {
            name: c.name.clone(),
            tag: c.tag.clone(),
            dim: c.dim,
            nnz: c.nnz(),
            vars_touched: c.coeffs.len(),
        })
        .collect();
    let max_dim = entries.iter().map(|e| e.dim).max().unwrap_or(0);
    DimensionAudit {
        scalar_count: problem.scalar_count(),
        constraint_count: problem.constraints.len(),
        entries,
        max_dim,
    }
}

impl std::fmt::Display for DimensionAudit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{} scalar variables, {} constraints, max block dim {}",
            self.scalar_count, self.constraint_count, self.max_dim
        )?;
        for e in &self.entries {
            writeln!(
                f,
                "  {:<28} [{:<22}] dim {:>3}  nnz {:>5}  vars {:>4}",
                e.name, e.tag, e.dim, e.nnz, e.vars_touched
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{VarShape, VariableRegistry};

    #[test]
    fn sparse_round_trip_preserves_entries() {
        let m = Matrix::from_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 3.0, 0.5],
            vec![0.0, 0.5, -4.0],
        ]).unwrap();
        let s = SparseSym::from_dense(&m);
        assert_eq!(s.nnz(), 5);
        assert_eq!(s.to_matrix().max_abs_diff(&m), 0.0);
        assert!((s.norm_fro() - m.norm_fro()).abs() < 1e-14);
    }

    #[test]
    fn value_at_is_affine() {
        let mut reg = VariableRegistry::new();
        reg.add("s", VarShape::Scalar, false).unwrap();
        let f0 = SparseSym::from_dense(&Matrix::from_diag(&[1.0, 2.0]));
        let fk = SparseSym::from_dense(&Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        let c = AffineConstraint {
            name: "c".into(),
            sense: Sense::NegativeDefinite,
            dim: 2,
            f0,
            coeffs: vec![(0, fk)],
            tag: "test".into(),
        };
        let v = c.value_at(&[3.0]).to_matrix();
        let expect = Matrix::from_rows(&[vec![1.0, 3.0], vec![3.0, 2.0]]).unwrap();
        assert_eq!(v.max_abs_diff(&expect), 0.0);
    }

    #[test]
    fn audit_of_empty_problem_is_empty() {
        let audit = dimension_audit(&LmiProblem::new(VariableRegistry::new()));
        assert_eq!(audit.constraint_count, 0);
        assert_eq!(audit.max_dim, 0);
        assert!(audit.entries.is_empty());
    }

    #[test]
    fn duplicate_constraint_names_rejected() {
        let reg = VariableRegistry::new();
        let mut p = LmiProblem::new(reg);
        let mk = || AffineConstraint {
            name: "dup".into(),
            sense: Sense::Zero,
            dim: 1,
            f0: SparseSym::from_dense(&Matrix::zeros(1, 1)),
            coeffs: vec![],
            tag: "t".into(),
        };
        p.push(mk()).unwrap();
        assert!(p.push(mk()).is_err());
    }
}
