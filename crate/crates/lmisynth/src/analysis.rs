//! Performance analysis of a fixed filter against the augmented error system.
//!
//! Assembles the full certificate for a given filter and disturbance level:
//! per-rule storage matrices on the augmented state, the shared functional
//! variables, the grid performance block, and the decay and coupling side
//! conditions. Feasibility certifies the stated attenuation level.

use crate::builder::ConstraintBuilder;
use crate::constraint::{LmiProblem, Sense};
use crate::descriptor::{
    descriptor_symmetry_audit, place_param, place_param_sym, place_param_t, register_param_var,
    DescriptorParam, ParamVar,
};
use crate::error::SynthError;
use crate::error_system::{build_error_system, DeltaMode, ErrorSystem};
use crate::filter::FilterRealization;
use crate::grid::{
    add_grid_core, decay_and_coupling_constraints, register_lkf_vars, GridLayout, LkfVars,
};
use crate::registry::{VarHandle, VariableRegistry, VarShape};
use matrixkit::Matrix;
use plantmodel::FuzzyPlant;

/// Options of an analysis assembly.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Disturbance attenuation level to certify.
    pub gamma: f64,
    /// Sensor gain matrix; defaults to the fault-band midpoint.
    pub beta: Option<Matrix>,
    /// Delay bounds per channel; defaults to the plant's delay specification.
    pub a_bar: Option<[f64; 3]>,
    /// Indicator treatment; defaults to expectation at the plant's weight.
    pub delta_mode: Option<DeltaMode>,
}

impl AnalysisOptions {
    /// Analysis at a fixed attenuation level with plant defaults.
    pub fn at_gamma(gamma: f64) -> Self {
        Self { gamma, beta: None, a_bar: None, delta_mode: None }
    }
}

/// Handles of the analysis decision variables.
#[derive(Debug, Clone)]
pub struct AnalysisVars {
    /// Per-rule storage matrices on the augmented state.
    pub p: Vec<ParamVar>,
    /// Shared storage slack for the membership-derivative bound.
    pub p0: VarHandle,
    /// Functional variables.
    pub lkf: LkfVars,
}

/// An assembled analysis program.
#[derive(Debug, Clone)]
pub struct AnalysisProblem {
    pub problem: LmiProblem,
    pub vars: AnalysisVars,
    /// Dimension of the grid performance block.
    pub grid_dim: usize,
    /// Descriptor data of the augmented state.
    pub desc: DescriptorParam,
}

/// Assembles the analysis program for a plant and a fixed filter.
pub fn assemble_analysis(
    plant: &FuzzyPlant,
    filter: &FilterRealization,
    opts: &AnalysisOptions,
) -> Result<AnalysisProblem, SynthError> {
    plant.validate()?;
    if opts.gamma <= 0.0 {
        return Err(SynthError::InvalidParameter(format!(
            "attenuation level must be positive, got {}",
            opts.gamma
        )));
    }
    let r = plant.rule_count();
    let n2 = 2 * plant.state_dim();
    let q = plant.disturbance_dim();
    let m = plant.output_dim();
    let delays = &plant.delays;
    let a_bar = opts.a_bar.unwrap_or([delays.d_0, delays.d_big, delays.tau_bar]);
    if a_bar.iter().any(|&a| a <= 0.0) {
        return Err(SynthError::InvalidParameter(
            "delay bounds must all be positive".into(),
        ));
    }
    let sigma = delays.sigma;
    let rho = plant.membership.rho.clone();
    let beta = opts.beta.clone().unwrap_or_else(|| plant.fault.midpoint());
    let mode = opts.delta_mode.unwrap_or(DeltaMode::Expectation(delays.delta0));

    let systems: Vec<ErrorSystem> = (0..r)
        .map(|i| build_error_system(plant, filter, i, i, &beta, mode))
        .collect::<Result<_, _>>()?;
    let desc = DescriptorParam::new(&systems[0].e)?;

    let mut reg = VariableRegistry::new();
    let mut p = Vec::with_capacity(r);
    for i in 0..r {
        p.push(register_param_var(&mut reg, &format!("P{}", i + 1), &desc)?);
    }
    let p0 = reg.add("P0", VarShape::Symmetric(n2), false)?;
    let lkf = register_lkf_vars(&mut reg, n2, r)?;

    let lay = GridLayout { n2, q, m, extra: 0 };
    let eye_n2 = Matrix::identity(n2);
    let et = desc.e.transpose();

    let mut problem = LmiProblem::new(reg.clone());
    for i in 0..r {
        problem.push(descriptor_symmetry_audit(
            &format!("descriptor-symmetry-P{}", i + 1),
            &reg,
            &p[i],
            &desc,
        )?)?;
    }
    for i in 0..r {
        let mut b = ConstraintBuilder::new(
            format!("lyapunov-positivity-P{}", i + 1),
            "lyapunov-positivity",
            Sense::PositiveDefinite,
            2 * n2,
        );
        b.place(&reg, p[i].core, 0, 0, &et, &desc.e, false, 1.0)?;
        b.place(&reg, p[i].core, n2, n2, &et, &desc.e, false, 1.0)?;
        b.place(&reg, p0, n2, n2, &eye_n2, &eye_n2, false, 1.0)?;
        problem.push(b.freeze()?)?;
    }
    for i in 0..r {
        let sys = &systems[i];
        let mut b = ConstraintBuilder::new(
            format!("performance-r{}", i + 1),
            "performance-block",
            Sense::NegativeDefinite,
            lay.dim(),
        );
        add_grid_core(&mut b, &reg, &lkf, i, &lay, &desc.e, &a_bar, &sigma)?;
        let g0 = lay.g(0);
        // Membership-derivative bound on the storage matrix.
        for (l, &rl) in rho.iter().enumerate() {
            b.place(&reg, p[l].core, g0, g0, &et, &desc.e, false, rl)?;
            b.place(&reg, p0, g0, g0, &eye_n2, &eye_n2, false, rl)?;
        }
        // Closed-loop coupling P'A + A'P on the instantaneous cell.
        place_param_t(&mut b, &reg, &p[i], &desc, g0, g0, &eye_n2, &sys.a, 1.0, true)?;
        // Delayed couplings.
        place_param_t(&mut b, &reg, &p[i], &desc, g0, lay.h(0), &eye_n2, &sys.a_d1, 1.0, true)?;
        place_param_t(&mut b, &reg, &p[i], &desc, g0, lay.h(1), &eye_n2, &sys.a_d2, 1.0, true)?;
        place_param_t(&mut b, &reg, &p[i], &desc, g0, lay.h(2), &eye_n2, &sys.a_tau, 1.0, true)?;
        // Disturbance coupling.
        place_param_t(&mut b, &reg, &p[i], &desc, g0, lay.omega(), &eye_n2, &sys.b, 1.0, true)?;
        // Derivative-cell couplings A'P per channel.
        let v = lay.v();
        place_param(&mut b, &reg, &p[i], &desc, g0, v, &sys.a.transpose(), &eye_n2, 1.0, true)?;
        place_param(&mut b, &reg, &p[i], &desc, lay.h(0), v, &sys.a_d1.transpose(), &eye_n2, 1.0, true)?;
        place_param(&mut b, &reg, &p[i], &desc, lay.h(1), v, &sys.a_d2.transpose(), &eye_n2, 1.0, true)?;
        place_param(&mut b, &reg, &p[i], &desc, lay.h(2), v, &sys.a_tau.transpose(), &eye_n2, 1.0, true)?;
        place_param(&mut b, &reg, &p[i], &desc, lay.omega(), v, &sys.b.transpose(), &eye_n2, 1.0, true)?;
        // Derivative cell: stored-energy tail minus the symmetrized storage.
        place_param_sym(&mut b, &reg, &p[i], &desc, v, -2.0)?;
        // Output couplings are constant for a fixed filter.
        b.add_const_pair(g0, lay.out(), &sys.c_out.transpose(), 1.0)?;
        b.add_const_pair(lay.h(0), lay.out(), &sys.c_d1.transpose(), 1.0)?;
        b.add_const_pair(lay.h(1), lay.out(), &sys.c_d2.transpose(), 1.0)?;
        b.add_const_pair(lay.h(2), lay.out(), &sys.c_tau.transpose(), 1.0)?;
        // Attenuation and output normalization.
        b.add_const(lay.omega(), lay.omega(), &Matrix::identity(q), -opts.gamma * opts.gamma)?;
        b.add_const(lay.out(), lay.out(), &Matrix::identity(m), -1.0)?;
        problem.push(b.freeze()?)?;
    }
    for c in decay_and_coupling_constraints(&reg, &lkf, n2, &rho, &a_bar)? {
        problem.push(c)?;
    }

    Ok(AnalysisProblem {
        problem,
        vars: AnalysisVars { p, p0, lkf },
        grid_dim: lay.dim(),
        desc,
    })
}
