//! Descriptor-aware parametrization of the Lyapunov-type variables.
//!
//! The synthesis conditions require matrices X with E'X = X'E >= 0. Instead
//! of carrying that equality into the solver, X is parametrized as
//! X = P E + V S with P symmetric, S free, and V a basis of the null space
//! of E'. Then E'X = E'P E holds structurally, and positivity of E'P E is
//! implied by positivity of P. For nonsingular E the null part is absent.

use crate::builder::ConstraintBuilder;
use crate::error::SynthError;
use crate::registry::{VarHandle, VariableRegistry, VarShape};
use matrixkit::{sym_eig, Matrix, SymmetricMatrix};

/// Null-space data of a descriptor matrix E.
#[derive(Debug, Clone)]
pub struct DescriptorParam {
    /// The descriptor itself.
    pub e: Matrix,
    /// Orthonormal basis of the null space of E', one column per direction.
    pub null_basis: Option<Matrix>,
    /// Rank of E.
    pub rank: usize,
}

impl DescriptorParam {
    /// Computes the null space of E' from the spectrum of E E'.
    pub fn new(e: &Matrix) -> Result<Self, SynthError> {
        if e.rows() != e.cols() {
            return Err(SynthError::Dimension(format!(
                "descriptor must be square, got {}x{}",
                e.rows(),
                e.cols()
            )));
        }
        let n = e.rows();
        let gram = e.matmul_transpose(e);
        let (vals, vecs) = sym_eig(&SymmetricMatrix::symmetrize(&gram))?;
        let lam_max = vals.first().copied().unwrap_or(0.0).max(0.0);
        let thr = lam_max * (n as f64) * 1e-10_f64.max(f64::EPSILON.sqrt());
        let mut null_cols = Vec::new();
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= thr {
                null_cols.push(k);
            }
        }
        let rank = n - null_cols.len();
        let null_basis = if null_cols.is_empty() {
            None
        } else {
            let mut v = Matrix::zeros(n, null_cols.len());
            for (out_c, &src_c) in null_cols.iter().enumerate() {
                for r in 0..n {
                    v[(r, out_c)] = vecs[(r, src_c)];
                }
            }
            Some(v)
        };
        Ok(Self { e: e.clone(), null_basis, rank })
    }

    /// Whether E is nonsingular.
    pub fn is_nonsingular(&self) -> bool {
        self.null_basis.is_none()
    }

    /// Dimension of the null space of E'.
    pub fn null_dim(&self) -> usize {
        self.null_basis.as_ref().map_or(0, |v| v.cols())
    }
}

/// Handles of one parametrized variable X = P E + V S.
#[derive(Debug, Clone, Copy)]
pub struct ParamVar {
    /// Symmetric core P.
    pub core: VarHandle,
    /// Free null-space part S, present only for singular descriptors.
    pub null: Option<VarHandle>,
}

/// Registers the core (and null part when needed) of one parametrized X.
pub fn register_param_var(
    reg: &mut VariableRegistry,
    name: &str,
    desc: &DescriptorParam,
) -> Result<ParamVar, SynthError> {
    let n = desc.e.rows();
    let core = reg.add(name.to_string(), VarShape::Symmetric(n), false)?;
    let null = match desc.null_dim() {
        0 => None,
        k => Some(reg.add(format!("{name}_null"), VarShape::General(k, n), false)?),
    };
    Ok(ParamVar { core, null })
}

/// Materializes X = P E + V S from a solution vector.
pub fn materialize_param(
    reg: &VariableRegistry,
    var: &ParamVar,
    desc: &DescriptorParam,
    x: &[f64],
) -> Matrix {
    let p = reg.materialize(var.core, x);
    let mut out = p.matmul(&desc.e);
    if let (Some(null), Some(v)) = (var.null, desc.null_basis.as_ref()) {
        let s = reg.materialize(null, x);
        out = out + v.matmul(&s);
    }
    out
}

/// Places `scale * L * X * R` where X = P E + V S.
#[allow(clippy::too_many_arguments)]
pub fn place_param(
    b: &mut ConstraintBuilder,
    reg: &VariableRegistry,
    var: &ParamVar,
    desc: &DescriptorParam,
    r0: usize,
    c0: usize,
    left: &Matrix,
    right: &Matrix,
    scale: f64,
    mirror: bool,
) -> Result<(), SynthError> {
    let er = desc.e.matmul(right);
    if mirror {
        b.place_pair(reg, var.core, r0, c0, left, &er, false, scale)?;
    } else {
        b.place(reg, var.core, r0, c0, left, &er, false, scale)?;
    }
    if let (Some(null), Some(v)) = (var.null, desc.null_basis.as_ref()) {
        let lv = left.matmul(v);
        if mirror {
            b.place_pair(reg, null, r0, c0, &lv, right, false, scale)?;
        } else {
            b.place(reg, null, r0, c0, &lv, right, false, scale)?;
        }
    }
    Ok(())
}

/// Places `scale * L * X' * R` where X = P E + V S, so X' = E'P + S'V'.
#[allow(clippy::too_many_arguments)]
pub fn place_param_t(
    b: &mut ConstraintBuilder,
    reg: &VariableRegistry,
    var: &ParamVar,
    desc: &DescriptorParam,
    r0: usize,
    c0: usize,
    left: &Matrix,
    right: &Matrix,
    scale: f64,
    mirror: bool,
) -> Result<(), SynthError> {
    let le = left.matmul(&desc.e.transpose());
    if mirror {
        b.place_pair(reg, var.core, r0, c0, &le, right, false, scale)?;
    } else {
        b.place(reg, var.core, r0, c0, &le, right, false, scale)?;
    }
    if let (Some(null), Some(v)) = (var.null, desc.null_basis.as_ref()) {
        let vr = v.transpose().matmul(right);
        if mirror {
            b.place_pair(reg, null, r0, c0, left, &vr, true, scale)?;
        } else {
            b.place(reg, null, r0, c0, left, &vr, true, scale)?;
        }
    }
    Ok(())
}

/// Places the symmetrized `scale * (X + X')/2` block at (r0, c0) == diagonal.
pub fn place_param_sym(
    b: &mut ConstraintBuilder,
    reg: &VariableRegistry,
    var: &ParamVar,
    desc: &DescriptorParam,
    r0: usize,
    scale: f64,
) -> Result<(), SynthError> {
    let n = desc.e.rows();
    let eye = Matrix::identity(n);
    place_param(b, reg, var, desc, r0, r0, &eye, &eye, 0.5 * scale, false)?;
    place_param_t(b, reg, var, desc, r0, r0, &eye, &eye, 0.5 * scale, false)
}

/// Emits the symmetry audit [[0, R'],[R, 0]] with R = E'X - X'E for one
/// parametrized variable. All coefficients cancel structurally; the solver
/// checks the remaining magnitude and skips the constraint.
pub fn descriptor_symmetry_audit(
    name: &str,
    reg: &VariableRegistry,
    var: &ParamVar,
    desc: &DescriptorParam,
) -> Result<crate::constraint::AffineConstraint, SynthError> {
    use crate::constraint::Sense;
    let n = desc.e.rows();
    let mut b = ConstraintBuilder::new(name, "descriptor-symmetry", Sense::Zero, 2 * n);
    let eye = Matrix::identity(n);
    let et = desc.e.transpose();
    // R = E'(P E + V S) - (E'P + S'V') E, placed at the lower-left block.
    place_param(&mut b, reg, var, desc, n, 0, &et, &eye, 1.0, true)?;
    place_param_t(&mut b, reg, var, desc, n, 0, &eye, &desc.e, -1.0, true)?;
    b.freeze()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::Sense;

    #[test]
    fn identity_descriptor_has_no_null_space() {
        let d = DescriptorParam::new(&Matrix::identity(3)).unwrap();
        assert!(d.is_nonsingular());
        assert_eq!(d.rank, 3);
    }

    #[test]
    fn singular_descriptor_null_basis_annihilates() {
        let e = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let d = DescriptorParam::new(&e).unwrap();
        assert_eq!(d.rank, 1);
        let v = d.null_basis.as_ref().unwrap();
        assert_eq!(v.cols(), 1);
        let etv = e.transpose().matmul(v);
        assert!(etv.max_abs() < 1e-12);
    }

    #[test]
    fn materialized_param_satisfies_descriptor_symmetry() {
        let e = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let d = DescriptorParam::new(&e).unwrap();
        let mut reg = VariableRegistry::new();
        let var = register_param_var(&mut reg, "X", &d).unwrap();
        let mut x = vec![0.0; reg.scalar_count()];
        for (k, v) in x.iter_mut().enumerate() {
            *v = 0.3 * (k as f64) - 0.7;
        }
        let xm = materialize_param(&reg, &var, &d, &x);
        let lhs = e.transpose().matmul(&xm);
        assert!(lhs.max_abs_diff(&lhs.transpose()) < 1e-12);
    }

    #[test]
    fn audit_coefficients_cancel() {
        for e in [
            Matrix::identity(2),
            Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 0.0]]).unwrap(),
        ] {
            let d = DescriptorParam::new(&e).unwrap();
            let mut reg = VariableRegistry::new();
            let var = register_param_var(&mut reg, "X", &d).unwrap();
            let audit = descriptor_symmetry_audit("audit-X", &reg, &var, &d).unwrap();
            assert_eq!(audit.sense, Sense::Zero);
            assert!(audit.f0.max_abs() == 0.0);
            assert!(audit.coeff_max_abs() <= 1e-10, "skew {}", audit.coeff_max_abs());
        }
    }

    #[test]
    fn placement_matches_materialization() {
        let e = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let d = DescriptorParam::new(&e).unwrap();
        let mut reg = VariableRegistry::new();
        let var = register_param_var(&mut reg, "X", &d).unwrap();
        let left = Matrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 0.0], vec![0.0, 1.0]]).unwrap();
        let right = Matrix::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, -1.0, 1.0]]).unwrap();

        let mut b = ConstraintBuilder::new("t", "test", Sense::NegativeDefinite, 6);
        place_param(&mut b, &reg, &var, &d, 3, 0, &left, &right, 0.7, true).unwrap();
        let c = b.freeze().unwrap();

        let mut x = vec![0.0; reg.scalar_count()];
        for (k, v) in x.iter_mut().enumerate() {
            *v = (k as f64 * 0.21).sin();
        }
        let xm = materialize_param(&reg, &var, &d, &x);
        let expect = left.matmul(&xm).matmul(&right).scale(0.7);
        let got = c.value_at(&x).to_matrix().block(3, 0, 3, 3);
        assert!(got.max_abs_diff(&expect) < 1e-12);
    }
}
