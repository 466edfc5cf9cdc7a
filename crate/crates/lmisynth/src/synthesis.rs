//! Filter synthesis assembly in transformed variables.
//!
//! Builds the convex program whose solution yields the filter gains: paired
//! storage factors per rule, shared functional variables, transformed gain
//! blocks, and the coupled grid inequality family. The robust variant wraps
//! each grid block with uncertainty certificate columns scaled by two fixed
//! multipliers.

use crate::builder::ConstraintBuilder;
use crate::constraint::{LmiProblem, Sense};
use crate::descriptor::{
    descriptor_symmetry_audit, materialize_param, place_param, place_param_sym, place_param_t,
    register_param_var, DescriptorParam, ParamVar,
};
use crate::error::SynthError;
use crate::filter::{recover_filter, FilterRealization, TildeVariables};
use crate::grid::{
    add_grid_core, decay_and_coupling_constraints, register_lkf_vars, GridLayout, LkfVars,
};
use crate::registry::{VarHandle, VariableRegistry, VarShape};
use matrixkit::Matrix;
use plantmodel::FuzzyPlant;

/// Attenuation treatment of a synthesis assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    /// Certify a fixed attenuation level.
    Fixed(f64),
    /// Add the squared level as a decision variable and minimize it.
    Minimize,
}

/// How the sensor gain band enters the synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaHandling {
    /// Use the band midpoint as the nominal gain.
    Midpoint,
    /// Enforce the grid family at every vertex of the gain band.
    Vertices,
}

/// Options of a synthesis assembly.
#[derive(Debug, Clone)]
pub struct SynthesisOptions {
    pub gamma: GammaSpec,
    pub beta: BetaHandling,
    /// Delay bounds per channel; defaults to the plant's specification.
    pub a_bar: Option<[f64; 3]>,
    /// Include the transformed state gain in both columns of the coupling
    /// block instead of only the first.
    pub theta1_symmetric_variant: bool,
    /// Override of the first-interval weight.
    pub delta0_override: Option<f64>,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            gamma: GammaSpec::Minimize,
            beta: BetaHandling::Midpoint,
            a_bar: None,
            theta1_symmetric_variant: false,
            delta0_override: None,
        }
    }
}

impl SynthesisOptions {
    /// Synthesis at a fixed attenuation level, other options default.
    pub fn fixed_gamma(gamma: f64) -> Self {
        Self { gamma: GammaSpec::Fixed(gamma), ..Self::default() }
    }
}

/// Handles of the synthesis decision variables.
#[derive(Debug, Clone)]
pub struct SynthesisVars {
    /// Per-rule upper storage factors.
    pub x: Vec<ParamVar>,
    /// Per-rule lower storage factors.
    pub y: Vec<ParamVar>,
    /// Shared storage slack for the membership-derivative bound.
    pub x0: VarHandle,
    /// Functional variables.
    pub lkf: LkfVars,
    /// Transformed filter gains per rule.
    pub a_f: Vec<VarHandle>,
    pub a_tau_f: Vec<VarHandle>,
    pub b_f: Vec<VarHandle>,
    pub e_f_out: Vec<VarHandle>,
    pub e_tau_f_out: Vec<VarHandle>,
    pub d_f: Vec<VarHandle>,
    /// Squared attenuation level when minimized.
    pub gamma2: Option<VarHandle>,
}

/// An assembled synthesis program with its extraction data.
#[derive(Debug, Clone)]
pub struct SynthesisProblem {
    pub problem: LmiProblem,
    pub vars: SynthesisVars,
    pub gamma: GammaSpec,
    /// Dimension of one grid inequality block.
    pub xi_dim: usize,
    /// Descriptor data of the plant state.
    pub plant_desc: DescriptorParam,
    /// First-interval weight baked into the assembly.
    pub delta0: f64,
    /// Sensor gain matrices the grid family was enforced at.
    pub beta_points: Vec<Matrix>,
}

impl SynthesisProblem {
    /// Attenuation level at a solution point, for minimized assemblies.
    pub fn gamma_value(&self, point: &[f64]) -> Option<f64> {
        self.vars.gamma2.map(|h| {
            let g2 = self.problem.registry.materialize(h, point)[(0, 0)];
            g2.max(0.0).sqrt()
        })
    }

    /// Materializes the transformed filter variables at a solution point.
    pub fn extract_tilde(&self, point: &[f64]) -> TildeVariables {
        let reg = &self.problem.registry;
        let r = self.vars.x.len();
        TildeVariables {
            x: (0..r)
                .map(|i| materialize_param(reg, &self.vars.x[i], &self.plant_desc, point))
                .collect(),
            y: (0..r)
                .map(|i| materialize_param(reg, &self.vars.y[i], &self.plant_desc, point))
                .collect(),
            a_f: self.vars.a_f.iter().map(|&h| reg.materialize(h, point)).collect(),
            a_tau_f: self.vars.a_tau_f.iter().map(|&h| reg.materialize(h, point)).collect(),
            b_f: self.vars.b_f.iter().map(|&h| reg.materialize(h, point)).collect(),
            e_f_out: self.vars.e_f_out.iter().map(|&h| reg.materialize(h, point)).collect(),
            e_tau_f_out: self.vars.e_tau_f_out.iter().map(|&h| reg.materialize(h, point)).collect(),
            d_f: self.vars.d_f.iter().map(|&h| reg.materialize(h, point)).collect(),
        }
    }

    /// Recovers the filter realization at a solution point.
    pub fn extract_filter(&self, point: &[f64]) -> Result<FilterRealization, SynthError> {
        recover_filter(&self.plant_desc.e, &self.extract_tilde(point))
    }
}

/// Fixed multipliers of the robust certificate columns.
#[derive(Debug, Clone, Copy)]
pub struct RobustEps {
    pub eps1: f64,
    pub eps2: f64,
}

struct SynCtx<'a> {
    plant: &'a FuzzyPlant,
    reg: VariableRegistry,
    vars: SynthesisVars,
    plant_desc: DescriptorParam,
    e_err: Matrix,
    lay: GridLayout,
    a_bar: [f64; 3],
    sigma: [f64; 3],
    rho: Vec<f64>,
    delta0: f64,
    theta1_symmetric_variant: bool,
    robust: Option<RobustEps>,
}

impl SynCtx<'_> {
    fn n(&self) -> usize {
        self.plant.state_dim()
    }

    /// Places the state coupling block (and its transpose) at (r0, c0).
    fn place_theta1(
        &self,
        b: &mut ConstraintBuilder,
        i: usize,
        j: usize,
        beta: &Matrix,
        r0: usize,
        c0: usize,
    ) -> Result<(), SynthError> {
        let n = self.n();
        let eye = Matrix::identity(n);
        let a_i = &self.plant.rules[i].a;
        let bc = beta.matmul(&self.plant.rules[i].c);
        let x = &self.vars.x[i];
        let y = &self.vars.y[j];
        // Top row: Y' A in both columns.
        place_param_t(b, &self.reg, y, &self.plant_desc, r0, c0, &eye, a_i, 1.0, true)?;
        place_param_t(b, &self.reg, y, &self.plant_desc, r0, c0 + n, &eye, a_i, 1.0, true)?;
        // Bottom row: X' A + B~ beta C (+ A~ in the first column).
        place_param_t(b, &self.reg, x, &self.plant_desc, r0 + n, c0, &eye, a_i, 1.0, true)?;
        place_param_t(b, &self.reg, x, &self.plant_desc, r0 + n, c0 + n, &eye, a_i, 1.0, true)?;
        b.place_pair(&self.reg, self.vars.b_f[i], r0 + n, c0, &eye, &bc, false, 1.0)?;
        b.place_pair(&self.reg, self.vars.b_f[i], r0 + n, c0 + n, &eye, &bc, false, 1.0)?;
        b.place_pair(&self.reg, self.vars.a_f[i], r0 + n, c0, &eye, &eye, false, 1.0)?;
        if self.theta1_symmetric_variant {
            b.place_pair(&self.reg, self.vars.a_f[i], r0 + n, c0 + n, &eye, &eye, false, 1.0)?;
        }
        Ok(())
    }

    /// Places one weighted delayed coupling block at (r0, c0).
    fn place_theta_delay(
        &self,
        b: &mut ConstraintBuilder,
        i: usize,
        j: usize,
        scale: f64,
        r0: usize,
        c0: usize,
    ) -> Result<(), SynthError> {
        let n = self.n();
        let eye = Matrix::identity(n);
        let a_d = &self.plant.rules[i].a_d;
        let x = &self.vars.x[i];
        let y = &self.vars.y[j];
        for dc in [0, n] {
            place_param_t(b, &self.reg, y, &self.plant_desc, r0, c0 + dc, &eye, a_d, scale, true)?;
            place_param_t(b, &self.reg, x, &self.plant_desc, r0 + n, c0 + dc, &eye, a_d, scale, true)?;
        }
        Ok(())
    }

    /// Places the paired storage coupling `[Y M; X M]`-shaped column used by
    /// the robust certificate at column offset c0, scaled.
    fn place_storage_column(
        &self,
        b: &mut ConstraintBuilder,
        i: usize,
        j: usize,
        r0: usize,
        c0: usize,
        scale: f64,
    ) -> Result<(), SynthError> {
        let n = self.n();
        let eye = Matrix::identity(n);
        let m_unc = &self.plant.uncertainty.m;
        place_param_t(b, &self.reg, &self.vars.y[j], &self.plant_desc, r0, c0, &eye, m_unc, scale, true)?;
        place_param_t(b, &self.reg, &self.vars.x[i], &self.plant_desc, r0 + n, c0, &eye, m_unc, scale, true)?;
        Ok(())
    }

    /// Builds one grid inequality block for the rule pair (i, j) into `b`.
    fn add_xi(
        &self,
        b: &mut ConstraintBuilder,
        i: usize,
        j: usize,
        beta: &Matrix,
        gamma: &GammaSpec,
    ) -> Result<(), SynthError> {
        let n = self.n();
        let lay = &self.lay;
        let reg = &self.reg;
        let eye_n = Matrix::identity(n);
        let eye_m = Matrix::identity(lay.m);
        let g0 = lay.g(0);
        let om = lay.omega();
        let v = lay.v();
        let out = lay.out();
        let d0 = self.delta0;
        let pr = &self.plant.rules[i];

        add_grid_core(b, reg, &self.vars.lkf, i, lay, &self.e_err, &self.a_bar, &self.sigma)?;

        // Membership-derivative bound on the paired storage.
        for (l, &rl) in self.rho.iter().enumerate() {
            place_param_sym(b, reg, &self.vars.x[l], &self.plant_desc, g0, rl)?;
            b.place(reg, self.vars.x0, g0, g0, &eye_n, &eye_n, false, rl)?;
        }

        // State, delayed, and disturbance couplings.
        self.place_theta1(b, i, j, beta, g0, g0)?;
        self.place_theta_delay(b, i, j, d0, g0, lay.h(0))?;
        self.place_theta_delay(b, i, j, 1.0 - d0, g0, lay.h(1))?;
        b.place_pair(reg, self.vars.a_tau_f[i], g0 + n, lay.h(2), &eye_n, &eye_n, false, 1.0)?;
        place_param_t(b, reg, &self.vars.y[j], &self.plant_desc, g0, om, &eye_n, &pr.b, 1.0, true)?;
        place_param_t(b, reg, &self.vars.x[i], &self.plant_desc, g0 + n, om, &eye_n, &pr.b, 1.0, true)?;

        // Derivative-cell couplings mirror the state couplings.
        self.place_theta1(b, i, j, beta, v, g0)?;
        self.place_theta_delay(b, i, j, d0, v, lay.h(0))?;
        self.place_theta_delay(b, i, j, 1.0 - d0, v, lay.h(1))?;
        b.place_pair(reg, self.vars.a_tau_f[i], v + n, lay.h(2), &eye_n, &eye_n, false, 1.0)?;
        place_param_t(b, reg, &self.vars.y[j], &self.plant_desc, v, om, &eye_n, &pr.b, 1.0, true)?;
        place_param_t(b, reg, &self.vars.x[i], &self.plant_desc, v + n, om, &eye_n, &pr.b, 1.0, true)?;

        // Derivative cell: minus the symmetrized paired storage.
        place_param(b, reg, &self.vars.y[j], &self.plant_desc, v, v, &eye_n, &eye_n, -1.0, true)?;
        place_param(b, reg, &self.vars.y[j], &self.plant_desc, v, v + n, &eye_n, &eye_n, -1.0, true)?;
        place_param(b, reg, &self.vars.y[j], &self.plant_desc, v + n, v, &eye_n, &eye_n, -1.0, true)?;
        place_param(b, reg, &self.vars.x[i], &self.plant_desc, v + n, v + n, &eye_n, &eye_n, -1.0, true)?;

        // Output row.
        let bc = beta.matmul(&pr.c);
        for dc in [0, n] {
            b.add_const_pair(out, g0 + dc, &pr.e_out, 1.0)?;
            b.place_pair(reg, self.vars.d_f[i], out, g0 + dc, &eye_m, &bc, false, 1.0)?;
            b.add_const_pair(out, lay.h(0) + dc, &pr.e_dout, d0)?;
            b.add_const_pair(out, lay.h(1) + dc, &pr.e_dout, 1.0 - d0)?;
        }
        b.place_pair(reg, self.vars.e_f_out[i], out, g0, &eye_m, &eye_n, false, -1.0)?;
        b.place_pair(reg, self.vars.e_tau_f_out[i], out, lay.h(2), &eye_m, &eye_n, false, -1.0)?;

        // Attenuation and output normalization.
        match gamma {
            GammaSpec::Fixed(g) => {
                b.add_const(om, om, &Matrix::identity(lay.q), -g * g)?;
            }
            GammaSpec::Minimize => {
                let h = self.vars.gamma2.expect("gamma2 registered in minimize mode");
                b.place_scalar_identity(reg, h, om, lay.q, -1.0)?;
            }
        }
        b.add_const(out, out, &Matrix::identity(lay.m), -1.0)?;

        // Robust certificate columns.
        if let Some(eps) = self.robust {
            self.add_robust_columns(b, i, j, eps)?;
        }
        Ok(())
    }

    /// Appends the uncertainty certificate columns and their diagonal tail.
    fn add_robust_columns(
        &self,
        b: &mut ConstraintBuilder,
        i: usize,
        j: usize,
        eps: RobustEps,
    ) -> Result<(), SynthError> {
        let n = self.n();
        let lay = &self.lay;
        let unc = &self.plant.uncertainty;
        let w = unc.width();
        let d0 = self.delta0;
        let base = lay.out() + lay.m;
        let (c1, c2, c3, c4) = (base, base + w, base + 2 * w, base + 3 * w);
        let g0 = lay.g(0);
        let m_unc = &unc.m;

        // First multiplier, left column: storage-weighted gain directions.
        self.place_storage_column(b, i, j, g0, c1, 1.0)?;
        self.place_storage_column(b, i, j, lay.h(0), c1, d0)?;
        self.place_storage_column(b, i, j, lay.h(1), c1, 1.0 - d0)?;
        // First multiplier, right column: structure directions.
        for (l, cell) in [(0usize, g0), (1, lay.h(0)), (2, lay.h(1))] {
            let nt = unc.n[l].transpose();
            b.add_const_pair(cell, c2, &nt, 1.0)?;
            b.add_const_pair(cell + n, c2, &nt, 1.0)?;
        }
        // Second multiplier, left column.
        b.add_const_pair(g0, c3, m_unc, 1.0)?;
        b.add_const_pair(g0 + n, c3, m_unc, 1.0)?;
        b.add_const_pair(lay.h(0), c3, m_unc, -d0)?;
        b.add_const_pair(lay.h(1), c3, m_unc, 1.0 - d0)?;
        b.add_const_pair(lay.h(2), c3, m_unc, 1.0)?;
        b.add_const_pair(lay.h(2) + n, c3, m_unc, 1.0)?;
        // Second multiplier, right column.
        b.add_const_pair(g0, c4, &unc.n[6].transpose(), 1.0)?;
        b.add_const_pair(g0 + n, c4, &unc.n[4].transpose(), 1.0)?;
        b.add_const_pair(lay.h(0), c4, &unc.n[3].transpose(), 1.0)?;
        b.add_const_pair(lay.h(0) + n, c4, &unc.n[3].transpose(), 1.0)?;
        b.add_const_pair(lay.h(1), c4, &unc.n[3].transpose(), 1.0)?;
        b.add_const_pair(lay.h(2), c4, &unc.n[7].transpose(), 1.0)?;
        b.add_const_pair(lay.h(2) + n, c4, &unc.n[4].transpose(), 1.0)?;
        // Diagonal tail.
        let eye_w = Matrix::identity(w);
        b.add_const(c1, c1, &eye_w, -eps.eps1)?;
        b.add_const(c2, c2, &eye_w, -1.0 / eps.eps1)?;
        b.add_const(c3, c3, &eye_w, -eps.eps2)?;
        b.add_const(c4, c4, &eye_w, -1.0 / eps.eps2)?;
        Ok(())
    }
}

fn assemble_inner(
    plant: &FuzzyPlant,
    opts: &SynthesisOptions,
    robust: Option<RobustEps>,
) -> Result<SynthesisProblem, SynthError> {
    plant.validate()?;
    if let GammaSpec::Fixed(g) = opts.gamma {
        if g <= 0.0 {
            return Err(SynthError::InvalidParameter(format!(
                "attenuation level must be positive, got {g}"
            )));
        }
    }
    if let Some(eps) = robust {
        if eps.eps1 <= 0.0 || eps.eps2 <= 0.0 {
            return Err(SynthError::InvalidParameter(
                "robust multipliers must be positive".into(),
            ));
        }
    }
    let r = plant.rule_count();
    let n = plant.state_dim();
    let q = plant.disturbance_dim();
    let s = plant.sensor_dim();
    let m = plant.output_dim();
    let n2 = 2 * n;
    let delays = &plant.delays;
    let delta0 = opts.delta0_override.unwrap_or(delays.delta0);
    if !(0.0..=1.0).contains(&delta0) {
        return Err(SynthError::InvalidParameter(format!(
            "first-interval weight {delta0} must lie in [0, 1]"
        )));
    }
    let a_bar = opts.a_bar.unwrap_or([delays.d_0, delays.d_big, delays.tau_bar]);
    if a_bar.iter().any(|&a| a <= 0.0) {
        return Err(SynthError::InvalidParameter(
            "delay bounds must all be positive".into(),
        ));
    }
    let sigma = delays.sigma;
    let rho = plant.membership.rho.clone();

    let plant_desc = DescriptorParam::new(&plant.e)?;
    let mut e_err = Matrix::zeros(n2, n2);
    e_err.set_block(0, 0, &plant.e);
    e_err.set_block(n, n, &plant.e);

    let beta_points: Vec<Matrix> = match opts.beta {
        BetaHandling::Midpoint => vec![plant.fault.midpoint()],
        BetaHandling::Vertices => {
            let mut out = Vec::with_capacity(1 << s);
            for mask in 0..(1usize << s) {
                let mut diag = Vec::with_capacity(s);
                for ch in 0..s {
                    let lo = plant.fault.beta_lower[ch];
                    let hi = plant.fault.beta_upper[ch];
                    diag.push(if mask >> ch & 1 == 1 { hi } else { lo });
                }
                out.push(Matrix::from_diag(&diag));
            }
            out
        }
    };

    let mut reg = VariableRegistry::new();
    let mut x = Vec::with_capacity(r);
    let mut y = Vec::with_capacity(r);
    for i in 0..r {
        x.push(register_param_var(&mut reg, &format!("X{}", i + 1), &plant_desc)?);
    }
    for j in 0..r {
        y.push(register_param_var(&mut reg, &format!("Y{}", j + 1), &plant_desc)?);
    }
    let x0 = reg.add("X0", VarShape::Symmetric(n), false)?;
    let lkf = register_lkf_vars(&mut reg, n2, r)?;
    let mut a_f = Vec::new();
    let mut a_tau_f = Vec::new();
    let mut b_f = Vec::new();
    let mut e_f_out = Vec::new();
    let mut e_tau_f_out = Vec::new();
    let mut d_f = Vec::new();
    for i in 0..r {
        a_f.push(reg.add(format!("Af{}", i + 1), VarShape::General(n, n), false)?);
        a_tau_f.push(reg.add(format!("Atf{}", i + 1), VarShape::General(n, n), false)?);
        b_f.push(reg.add(format!("Bf{}", i + 1), VarShape::General(n, s), false)?);
        e_f_out.push(reg.add(format!("Ef{}", i + 1), VarShape::General(m, n), false)?);
        e_tau_f_out.push(reg.add(format!("Etf{}", i + 1), VarShape::General(m, n), false)?);
        d_f.push(reg.add(format!("Df{}", i + 1), VarShape::General(m, s), false)?);
    }
    let gamma2 = match opts.gamma {
        GammaSpec::Minimize => Some(reg.add("gamma2", VarShape::Scalar, true)?),
        GammaSpec::Fixed(_) => None,
    };
    let vars = SynthesisVars {
        x,
        y,
        x0,
        lkf,
        a_f,
        a_tau_f,
        b_f,
        e_f_out,
        e_tau_f_out,
        d_f,
        gamma2,
    };

    let extra = if robust.is_some() { 4 * plant.uncertainty.width() } else { 0 };
    let lay = GridLayout { n2, q, m, extra };
    let ctx = SynCtx {
        plant,
        reg: reg.clone(),
        vars,
        plant_desc,
        e_err,
        lay,
        a_bar,
        sigma,
        rho: rho.clone(),
        delta0,
        theta1_symmetric_variant: opts.theta1_symmetric_variant,
        robust,
    };

    let mut problem = LmiProblem::new(reg.clone());
    let eye_n = Matrix::identity(n);
    let et = ctx.plant_desc.e.transpose();

    for i in 0..r {
        problem.push(descriptor_symmetry_audit(
            &format!("descriptor-symmetry-X{}", i + 1),
            &reg,
            &ctx.vars.x[i],
            &ctx.plant_desc,
        )?)?;
    }
    for j in 0..r {
        problem.push(descriptor_symmetry_audit(
            &format!("descriptor-symmetry-Y{}", j + 1),
            &reg,
            &ctx.vars.y[j],
            &ctx.plant_desc,
        )?)?;
    }
    for i in 0..r {
        for j in 0..r {
            let mut b = ConstraintBuilder::new(
                format!("x-dominance-r{}{}", i + 1, j + 1),
                "x-dominance",
                Sense::PositiveDefinite,
                n,
            );
            b.place(&reg, ctx.vars.x[i].core, 0, 0, &et, &ctx.plant_desc.e, false, 1.0)?;
            b.place(&reg, ctx.vars.y[j].core, 0, 0, &et, &ctx.plant_desc.e, false, -1.0)?;
            problem.push(b.freeze()?)?;
        }
    }
    for i in 0..r {
        let mut b = ConstraintBuilder::new(
            format!("lyapunov-positivity-X{}", i + 1),
            "lyapunov-positivity",
            Sense::PositiveDefinite,
            2 * n,
        );
        b.place(&reg, ctx.vars.x[i].core, 0, 0, &et, &ctx.plant_desc.e, false, 1.0)?;
        place_param_sym(&mut b, &reg, &ctx.vars.x[i], &ctx.plant_desc, n, 1.0)?;
        b.place(&reg, ctx.vars.x0, n, n, &eye_n, &eye_n, false, 1.0)?;
        problem.push(b.freeze()?)?;
    }
    for j in 0..r {
        let mut b = ConstraintBuilder::new(
            format!("lyapunov-positivity-Y{}", j + 1),
            "lyapunov-positivity",
            Sense::PositiveDefinite,
            n,
        );
        b.place(&reg, ctx.vars.y[j].core, 0, 0, &et, &ctx.plant_desc.e, false, 1.0)?;
        problem.push(b.freeze()?)?;
    }
    for c in decay_and_coupling_constraints(&reg, &ctx.vars.lkf, n2, &rho, &a_bar)? {
        problem.push(c)?;
    }

    let (block_tag, block_stem) = if robust.is_some() {
        ("robust-block", "robust")
    } else {
        ("xi-block", "xi")
    };
    for (bi, beta) in beta_points.iter().enumerate() {
        let suffix = if beta_points.len() > 1 {
            format!("-v{}", bi + 1)
        } else {
            String::new()
        };
        for i in 0..r {
            let mut b = ConstraintBuilder::new(
                format!("{block_stem}-r{}{}{suffix}", i + 1, i + 1),
                block_tag,
                Sense::NegativeDefinite,
                lay.dim(),
            );
            ctx.add_xi(&mut b, i, i, beta, &opts.gamma)?;
            problem.push(b.freeze()?)?;
        }
        for i in 0..r {
            for j in (i + 1)..r {
                let mut b = ConstraintBuilder::new(
                    format!("{block_stem}-r{}{}-sym{suffix}", i + 1, j + 1),
                    if robust.is_some() { "robust-block" } else { "xi-cross" },
                    Sense::NegativeDefinite,
                    lay.dim(),
                );
                ctx.add_xi(&mut b, i, j, beta, &opts.gamma)?;
                ctx.add_xi(&mut b, j, i, beta, &opts.gamma)?;
                problem.push(b.freeze()?)?;
            }
        }
    }

    if let Some(h) = ctx.vars.gamma2 {
        let range = reg.scalar_range(h);
        problem.objective = Some(vec![(range.start, 1.0)]);
    }

    Ok(SynthesisProblem {
        problem,
        vars: ctx.vars,
        gamma: opts.gamma,
        xi_dim: lay.dim(),
        plant_desc: ctx.plant_desc,
        delta0,
        beta_points,
    })
}

/// Assembles the nominal synthesis program.
pub fn assemble_synthesis(
    plant: &FuzzyPlant,
    opts: &SynthesisOptions,
) -> Result<SynthesisProblem, SynthError> {
    assemble_inner(plant, opts, None)
}

/// Assembles the robust synthesis program with fixed certificate multipliers.
/// With the uncertainty channel disabled the extra columns carry no coupling,
/// so feasibility coincides with the nominal assembly.
pub fn assemble_robust(
    plant: &FuzzyPlant,
    opts: &SynthesisOptions,
    eps: RobustEps,
) -> Result<SynthesisProblem, SynthError> {
    assemble_inner(plant, opts, Some(eps))
}
