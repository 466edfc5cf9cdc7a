//! Shared functional-grid pieces of the analysis and synthesis blocks.
//!
//! Both theorems share one 8-cell grid over the augmented state, its three
//! delayed copies, three boundary copies, and a norm-bound tail, plus the
//! decay and coupling side conditions of the piecewise functional. This
//! module owns the grid geometry, the functional variable set, and the
//! placements common to both assemblies.

use crate::builder::ConstraintBuilder;
use crate::constraint::Sense;
use crate::error::SynthError;
use crate::registry::{VarHandle, VarShape, VariableRegistry};
use matrixkit::Matrix;

/// Block offsets of one grid constraint.
///
/// Layout: eight state cells of width `n2`, then the disturbance cell,
/// the derivative cell, the output cell, and optional extra columns.
#[derive(Debug, Clone, Copy)]
pub struct GridLayout {
    /// Augmented state dimension (one grid cell).
    pub n2: usize,
    /// Disturbance dimension.
    pub q: usize,
    /// Error output dimension.
    pub m: usize,
    /// Extra trailing columns (robustness certificates).
    pub extra: usize,
}

impl GridLayout {
    /// Offset of grid cell `k` (0..8).
    pub fn g(&self, k: usize) -> usize {
        k * self.n2
    }

    /// Offset of the delayed-state cell for delay channel `l` (0..3).
    pub fn h(&self, l: usize) -> usize {
        self.g([1, 2, 5][l])
    }

    /// Offset of the boundary cell for delay channel `l` (0..3).
    pub fn p(&self, l: usize) -> usize {
        self.g([3, 4, 6][l])
    }

    /// Offset of the disturbance cell.
    pub fn omega(&self) -> usize {
        8 * self.n2
    }

    /// Offset of the derivative cell.
    pub fn v(&self) -> usize {
        8 * self.n2 + self.q
    }

    /// Offset of the output cell.
    pub fn out(&self) -> usize {
        8 * self.n2 + self.q + self.n2
    }

    /// Full constraint dimension.
    pub fn dim(&self) -> usize {
        8 * self.n2 + self.q + self.n2 + self.m + self.extra
    }
}

/// Handles of the piecewise functional variables, indexed [channel][rule].
#[derive(Debug, Clone)]
pub struct LkfVars {
    pub q: Vec<Vec<VarHandle>>,
    pub r: Vec<Vec<VarHandle>>,
    pub z: Vec<Vec<VarHandle>>,
    pub m: Vec<Vec<VarHandle>>,
    pub s: Vec<VarHandle>,
    pub w: Vec<VarHandle>,
    pub q4: VarHandle,
    pub l_slack: Vec<VarHandle>,
    pub k_slack: Vec<VarHandle>,
    pub n_slack: Vec<VarHandle>,
}

/// Registers the functional variables over `rules` rules at cell width `n2`.
/// The per-rule decay weights are flagged for solver-side positivity.
pub fn register_lkf_vars(
    reg: &mut VariableRegistry,
    n2: usize,
    rules: usize,
) -> Result<LkfVars, SynthError> {
    let sym = VarShape::Symmetric(n2);
    let gen = VarShape::General(n2, n2);
    let per_rule = |reg: &mut VariableRegistry, stem: &str, shape, psd| {
        let mut out = Vec::with_capacity(3);
        for k in 0..3 {
            let mut row = Vec::with_capacity(rules);
            for i in 0..rules {
                row.push(reg.add(format!("{stem}{}_{}", k + 1, i + 1), shape, psd)?);
            }
            out.push(row);
        }
        Ok::<_, SynthError>(out)
    };
    let q = per_rule(reg, "Q", sym, true)?;
    let r = per_rule(reg, "R", sym, true)?;
    let z = per_rule(reg, "Z", sym, false)?;
    let m = per_rule(reg, "M", gen, false)?;
    let mut s = Vec::new();
    let mut w = Vec::new();
    for k in 0..3 {
        s.push(reg.add(format!("S{}", k + 1), sym, false)?);
        w.push(reg.add(format!("W{}", k + 1), sym, false)?);
    }
    let q4 = reg.add("Q4", sym, false)?;
    let mut l_slack = Vec::new();
    let mut k_slack = Vec::new();
    let mut n_slack = Vec::new();
    for k in 0..3 {
        l_slack.push(reg.add(format!("L{}", k + 1), sym, false)?);
        k_slack.push(reg.add(format!("K{}", k + 1), sym, false)?);
        n_slack.push(reg.add(format!("N{}", k + 1), sym, false)?);
    }
    Ok(LkfVars { q, r, z, m, s, w, q4, l_slack, k_slack, n_slack })
}

/// Places the functional-grid blocks shared by both theorems for rule `i`:
/// the accumulated weights on the instantaneous cell, the cross and boundary
/// couplings per delay channel, the decayed diagonal cells, the stored-energy
/// tail on the derivative cell, and the retarded-output weight.
#[allow(clippy::too_many_arguments)]
pub fn add_grid_core(
    b: &mut ConstraintBuilder,
    reg: &VariableRegistry,
    vars: &LkfVars,
    i: usize,
    lay: &GridLayout,
    e_bar: &Matrix,
    a_bar: &[f64; 3],
    sigma: &[f64; 3],
) -> Result<(), SynthError> {
    let n2 = lay.n2;
    let eye = Matrix::identity(n2);
    let et = e_bar.transpose();
    let g0 = lay.g(0);
    for k in 0..3 {
        b.place(reg, vars.q[k][i], g0, g0, &eye, &eye, false, 1.0)?;
        b.place(reg, vars.r[k][i], g0, g0, &eye, &eye, false, 1.0)?;
        b.place(reg, vars.s[k], g0, g0, &eye, &eye, false, a_bar[k])?;
        b.place(reg, vars.z[k][i], g0, g0, &et, e_bar, false, -1.0)?;
    }
    b.place(reg, vars.q4, g0, g0, &eye, &eye, false, 1.0)?;
    for l in 0..3 {
        let h = lay.h(l);
        let p = lay.p(l);
        // Cross coupling instantaneous -> delayed: E'(Z - M)E.
        b.place_pair(reg, vars.z[l][i], g0, h, &et, e_bar, false, 1.0)?;
        b.place_pair(reg, vars.m[l][i], g0, h, &et, e_bar, false, -1.0)?;
        // Instantaneous -> boundary: E'M E.
        b.place_pair(reg, vars.m[l][i], g0, p, &et, e_bar, false, 1.0)?;
        // Delayed diagonal: -(1-sigma)Q - 2E'ZE + E'(M + M')E.
        b.place(reg, vars.q[l][i], h, h, &eye, &eye, false, -(1.0 - sigma[l]))?;
        b.place(reg, vars.z[l][i], h, h, &et, e_bar, false, -2.0)?;
        b.place_pair(reg, vars.m[l][i], h, h, &et, e_bar, false, 1.0)?;
        // Boundary diagonal: -E'(Z + R)E.
        b.place(reg, vars.z[l][i], p, p, &et, e_bar, false, -1.0)?;
        b.place(reg, vars.r[l][i], p, p, &et, e_bar, false, -1.0)?;
        // Delayed -> boundary coupling: E'(Z - M)E.
        b.place_pair(reg, vars.z[l][i], h, p, &et, e_bar, false, 1.0)?;
        b.place_pair(reg, vars.m[l][i], h, p, &et, e_bar, false, -1.0)?;
    }
    let g7 = lay.g(7);
    b.place(reg, vars.q4, g7, g7, &eye, &eye, false, -1.0)?;
    let v = lay.v();
    for k in 0..3 {
        let a2 = a_bar[k] * a_bar[k];
        b.place(reg, vars.z[k][i], v, v, &eye, &eye, false, a2)?;
        b.place(reg, vars.w[k], v, v, &eye, &eye, false, 0.5 * a2)?;
    }
    Ok(())
}

/// Builds the decay and coupling side conditions per (channel, rule): three
/// folded decay constraints pairing the accumulated-derivative bound with
/// the positivity of the bounded combination, and the cross-coupling block.
pub fn decay_and_coupling_constraints(
    reg: &VariableRegistry,
    vars: &LkfVars,
    n2: usize,
    rho: &[f64],
    a_bar: &[f64; 3],
) -> Result<Vec<crate::constraint::AffineConstraint>, SynthError> {
    let rules = rho.len();
    let eye = Matrix::identity(n2);
    let mut out = Vec::with_capacity(12 * rules);
    for k in 0..3 {
        for i in 0..rules {
            // Channel decay through the state weights.
            let mut b = ConstraintBuilder::new(
                format!("decay-q-k{}-r{}", k + 1, i + 1),
                "lkf-decay-q",
                Sense::NegativeDefinite,
                2 * n2,
            );
            for (l, &rl) in rho.iter().enumerate() {
                b.place(reg, vars.q[k][l], 0, 0, &eye, &eye, false, rl)?;
                b.place(reg, vars.r[k][l], 0, 0, &eye, &eye, false, rl)?;
                b.place(reg, vars.l_slack[k], 0, 0, &eye, &eye, false, rl)?;
            }
            b.place(reg, vars.s[k], 0, 0, &eye, &eye, false, -1.0)?;
            b.place(reg, vars.q[k][i], n2, n2, &eye, &eye, false, -1.0)?;
            b.place(reg, vars.r[k][i], n2, n2, &eye, &eye, false, -1.0)?;
            b.place(reg, vars.l_slack[k], n2, n2, &eye, &eye, false, -1.0)?;
            out.push(b.freeze()?);

            // Channel decay through the boundary weights.
            let mut b = ConstraintBuilder::new(
                format!("decay-r-k{}-r{}", k + 1, i + 1),
                "lkf-decay-r",
                Sense::NegativeDefinite,
                2 * n2,
            );
            for (l, &rl) in rho.iter().enumerate() {
                b.place(reg, vars.r[k][l], 0, 0, &eye, &eye, false, rl)?;
                b.place(reg, vars.k_slack[k], 0, 0, &eye, &eye, false, rl)?;
            }
            b.place(reg, vars.s[k], 0, 0, &eye, &eye, false, -1.0)?;
            b.place(reg, vars.r[k][i], n2, n2, &eye, &eye, false, -1.0)?;
            b.place(reg, vars.k_slack[k], n2, n2, &eye, &eye, false, -1.0)?;
            out.push(b.freeze()?);

            // Channel decay through the derivative weights.
            let mut b = ConstraintBuilder::new(
                format!("decay-z-k{}-r{}", k + 1, i + 1),
                "lkf-decay-z",
                Sense::NegativeDefinite,
                2 * n2,
            );
            for (l, &rl) in rho.iter().enumerate() {
                b.place(reg, vars.z[k][l], 0, 0, &eye, &eye, false, rl)?;
                b.place(reg, vars.n_slack[k], 0, 0, &eye, &eye, false, rl)?;
            }
            b.place(reg, vars.w[k], 0, 0, &eye, &eye, false, -1.0 / a_bar[k])?;
            b.place(reg, vars.z[k][i], n2, n2, &eye, &eye, false, -1.0)?;
            b.place(reg, vars.n_slack[k], n2, n2, &eye, &eye, false, -1.0)?;
            out.push(b.freeze()?);

            // Coupling block keeping the cross weight dominated.
            let mut b = ConstraintBuilder::new(
                format!("zm-coupling-k{}-r{}", k + 1, i + 1),
                "zm-coupling",
                Sense::PositiveDefinite,
                2 * n2,
            );
            b.place(reg, vars.z[k][i], 0, 0, &eye, &eye, false, 1.0)?;
            b.place(reg, vars.z[k][i], n2, n2, &eye, &eye, false, 1.0)?;
            b.place_pair(reg, vars.m[k][i], 0, n2, &eye, &eye, false, 1.0)?;
            out.push(b.freeze()?);
        }
    }
    Ok(out)
}
