//! Incremental constraint assembly.
//!
//! A builder accumulates one affine matrix constraint block by block. Terms
//! of the form `scale * L * V * R` (with `V` a registered variable, possibly
//! transposed) are expanded scalar-by-scalar through the variable's basis, so
//! the frozen constraint stores exact per-scalar coefficient matrices.
//! Freezing verifies symmetry and converts to the sparse packed form.

use crate::constraint::{AffineConstraint, Sense, SparseSym};
use crate::error::SynthError;
use crate::registry::{VarHandle, VariableRegistry};
use matrixkit::Matrix;
use std::collections::BTreeMap;

/// Builder for a single affine matrix constraint.
pub struct ConstraintBuilder {
    name: String,
    tag: String,
    sense: Sense,
    dim: usize,
    f0: Matrix,
    terms: BTreeMap<usize, Matrix>,
}

impl ConstraintBuilder {
    /// Starts an empty constraint of the given dimension.
    pub fn new(name: impl Into<String>, tag: impl Into<String>, sense: Sense, dim: usize) -> Self {
        Self {
            name: name.into(),
            tag: tag.into(),
            sense,
            dim,
            f0: Matrix::zeros(dim, dim),
            terms: BTreeMap::new(),
        }
    }

    /// Constraint dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot_error(&self, r0: usize, c0: usize, what: &str) -> SynthError {
        SynthError::Dimension(format!(
            "constraint `{}` slot ({r0},{c0}): {what}",
            self.name
        ))
    }

    /// Adds `scale * block` to the constant term at offset (r0, c0).
    pub fn add_const(
        &mut self,
        r0: usize,
        c0: usize,
        block: &Matrix,
        scale: f64,
    ) -> Result<(), SynthError> {
        if r0 + block.rows() > self.dim || c0 + block.cols() > self.dim {
            return Err(self.slot_error(
                r0,
                c0,
                &format!("constant block {}x{} exceeds dim {}", block.rows(), block.cols(), self.dim),
            ));
        }
        if scale == 0.0 {
            return Ok(());
        }
        self.f0.add_block_scaled(r0, c0, block, scale);
        Ok(())
    }

    /// Adds `scale * block` at (r0, c0) and its transpose at (c0, r0).
    pub fn add_const_pair(
        &mut self,
        r0: usize,
        c0: usize,
        block: &Matrix,
        scale: f64,
    ) -> Result<(), SynthError> {
        self.add_const(r0, c0, block, scale)?;
        self.add_const(c0, r0, &block.transpose(), scale)
    }

    /// Accumulates `scale * left * V * right` at offset (r0, c0), where `V`
    /// is the variable (transposed first when `transposed` is set).
    pub fn place(
        &mut self,
        reg: &VariableRegistry,
        var: VarHandle,
        r0: usize,
        c0: usize,
        left: &Matrix,
        right: &Matrix,
        transposed: bool,
        scale: f64,
    ) -> Result<(), SynthError> {
        let (vr, vc) = reg.info(var).shape.dims();
        let (er, ec) = if transposed { (vc, vr) } else { (vr, vc) };
        if left.cols() != er {
            return Err(self.slot_error(
                r0,
                c0,
                &format!(
                    "left factor is {}x{} but variable `{}`{} has {} rows",
                    left.rows(),
                    left.cols(),
                    reg.info(var).name,
                    if transposed { " (transposed)" } else { "" },
                    er
                ),
            ));
        }
        if right.rows() != ec {
            return Err(self.slot_error(
                r0,
                c0,
                &format!(
                    "right factor is {}x{} but variable `{}`{} has {} cols",
                    right.rows(),
                    right.cols(),
                    reg.info(var).name,
                    if transposed { " (transposed)" } else { "" },
                    ec
                ),
            ));
        }
        if r0 + left.rows() > self.dim || c0 + right.cols() > self.dim {
            return Err(self.slot_error(r0, c0, "placed block exceeds constraint dim"));
        }
        if scale == 0.0 {
            return Ok(());
        }
        let dim = self.dim;
        for (idx, cells) in reg.basis(var) {
            let t = self
                .terms
                .entry(idx)
                .or_insert_with(|| Matrix::zeros(dim, dim));
            for &(br, bc, bv) in &cells {
                let (a, b) = if transposed { (bc, br) } else { (br, bc) };
                let w = scale * bv;
                for li in 0..left.rows() {
                    let lv = left[(li, a)];
                    if lv == 0.0 {
                        continue;
                    }
                    for rj in 0..right.cols() {
                        let rv = right[(b, rj)];
                        if rv != 0.0 {
                            t[(r0 + li, c0 + rj)] += w * lv * rv;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Places a term at (r0, c0) and its transpose at (c0, r0). With
    /// r0 == c0 this realizes symmetrized diagonal terms `T + T'`.
    #[allow(clippy::too_many_arguments)]
    pub fn place_pair(
        &mut self,
        reg: &VariableRegistry,
        var: VarHandle,
        r0: usize,
        c0: usize,
        left: &Matrix,
        right: &Matrix,
        transposed: bool,
        scale: f64,
    ) -> Result<(), SynthError> {
        self.place(reg, var, r0, c0, left, right, transposed, scale)?;
        self.place(
            reg,
            var,
            c0,
            r0,
            &right.transpose(),
            &left.transpose(),
            !transposed,
            scale,
        )
    }

    /// Adds `scale * I_count` of a scalar variable on the diagonal at r0.
    pub fn place_scalar_identity(
        &mut self,
        reg: &VariableRegistry,
        var: VarHandle,
        r0: usize,
        count: usize,
        scale: f64,
    ) -> Result<(), SynthError> {
        let eye = Matrix::identity(count);
        if r0 + count > self.dim {
            return Err(self.slot_error(r0, r0, "scalar identity exceeds constraint dim"));
        }
        for e in 0..count {
            let col = eye.block(0, e, count, 1);
            let row = col.transpose();
            self.place(reg, var, r0, r0, &col, &row, false, scale)?;
        }
        Ok(())
    }

    /// Validates symmetry of every accumulated matrix and produces the
    /// sparse constraint. Symmetry skew beyond 1e-12 relative is an error.
    pub fn freeze(self) -> Result<AffineConstraint, SynthError> {
        let name = self.name;
        let check = |m: &Matrix| -> Result<Matrix, f64> {
            let mut skew = 0.0_f64;
            for i in 0..m.rows() {
                for j in 0..i {
                    skew = skew.max((m[(i, j)] - m[(j, i)]).abs());
                }
            }
            if skew > 1e-12 * (1.0 + m.max_abs()) {
                return Err(skew);
            }
            let mut s = Matrix::zeros(m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    s[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
                }
            }
            Ok(s)
        };
        let f0 = check(&self.f0)
            .map_err(|skew| SynthError::AsymmetricCoefficient { name: name.clone(), skew })?;
        let mut coeffs = Vec::new();
        for (idx, m) in self.terms {
            let sym = check(&m)
                .map_err(|skew| SynthError::AsymmetricCoefficient { name: name.clone(), skew })?;
            if sym.max_abs() > 0.0 {
                coeffs.push((idx, SparseSym::from_dense(&sym)));
            }
        }
        Ok(AffineConstraint {
            name,
            sense: self.sense,
            dim: self.dim,
            f0: SparseSym::from_dense(&f0),
            coeffs,
            tag: self.tag,
        })
    }
}
