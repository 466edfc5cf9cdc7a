use std::fmt;
use std::sync::Arc;

use crate::delay::DelaySpec;
use crate::error::PlantError;
use crate::fault::SensorFaultModel;
use crate::membership::MembershipModel;
use crate::uncertainty::UncertaintyStructure;
use matrixkit::{determinant, rank_via_gram, solve_linear, Matrix};

/// One fuzzy rule's local linear dynamics and outputs.
#[derive(Debug, Clone)]
pub struct FuzzyRule {
    pub a: Matrix,
    pub a_d: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub e_out: Matrix,
    pub e_dout: Matrix,
}

/// State history over the pre-initial window.
#[derive(Clone)]
pub enum InitialFunction {
    Constant(Vec<f64>),
    Callable(Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>),
}

impl InitialFunction {
    pub fn value(&self, t: f64) -> Vec<f64> {
        match self {
            Self::Constant(v) => v.clone(),
            Self::Callable(f) => f(t),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Constant(v) => Some(v.len()),
            Self::Callable(_) => None,
        }
    }
}

impl fmt::Debug for InitialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            Self::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

/// Fuzzy singular plant: descriptor matrix, per-rule dynamics, membership
/// model, delay specification, uncertainty and sensor-fault descriptions.
#[derive(Debug, Clone)]
pub struct FuzzyPlant {
    pub e: Matrix,
    pub rules: Vec<FuzzyRule>,
    pub membership: MembershipModel,
    pub delays: DelaySpec,
    pub uncertainty: UncertaintyStructure,
    pub fault: SensorFaultModel,
    pub psi: InitialFunction,
    /// Rank of the descriptor matrix, fixed at construction.
    pub rank_e: usize,
}

impl FuzzyPlant {
    pub fn new(
        e: Matrix,
        rules: Vec<FuzzyRule>,
        membership: MembershipModel,
        delays: DelaySpec,
        uncertainty: UncertaintyStructure,
        fault: SensorFaultModel,
        psi: InitialFunction,
    ) -> Result<Self, PlantError> {
        let rank_e = rank_via_gram(&e, None)?;
        let plant = Self {
            e,
            rules,
            membership,
            delays,
            uncertainty,
            fault,
            psi,
            rank_e,
        };
        plant.validate()?;
        Ok(plant)
    }

    /// Same plant under a different delay specification.
    pub fn with_delays(&self, delays: DelaySpec) -> Result<Self, PlantError> {
        let mut plant = self.clone();
        plant.delays = delays;
        plant.validate()?;
        Ok(plant)
    }

    /// Same plant with the uncertainty channel replaced.
    pub fn with_uncertainty(&self, uncertainty: UncertaintyStructure) -> Result<Self, PlantError> {
        let mut plant = self.clone();
        plant.uncertainty = uncertainty;
        plant.validate()?;
        Ok(plant)
    }

    pub fn state_dim(&self) -> usize {
        self.e.rows()
    }

    pub fn disturbance_dim(&self) -> usize {
        self.rules[0].b.cols()
    }

    pub fn sensor_dim(&self) -> usize {
        self.rules[0].c.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.rules[0].e_out.rows()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn validate(&self) -> Result<(), PlantError> {
        let n = self.state_dim();
        if !self.e.is_square() {
            return Err(PlantError::Dimension(format!(
                "descriptor matrix is {}x{}",
                self.e.rows(),
                self.e.cols()
            )));
        }
        if self.rules.is_empty() {
            return Err(PlantError::Dimension("plant has no rules".into()));
        }
        let q = self.disturbance_dim();
        let s = self.sensor_dim();
        let m = self.output_dim();
        for (i, rule) in self.rules.iter().enumerate() {
            let checks = [
                ("A", &rule.a, n, n),
                ("A_d", &rule.a_d, n, n),
                ("B", &rule.b, n, q),
                ("C", &rule.c, s, n),
                ("E_out", &rule.e_out, m, n),
                ("E_dout", &rule.e_dout, m, n),
            ];
            for (name, mat, rows, cols) in checks {
                if mat.rows() != rows || mat.cols() != cols {
                    return Err(PlantError::Dimension(format!(
                        "rule {i} matrix {name} is {}x{}, expected {rows}x{cols}",
                        mat.rows(),
                        mat.cols()
                    )));
                }
            }
        }
        self.membership.validate()?;
        if self.membership.rule_count() != self.rules.len() {
            return Err(PlantError::Dimension(format!(
                "membership defines {} rules, plant has {}",
                self.membership.rule_count(),
                self.rules.len()
            )));
        }
        self.delays.validate()?;
        self.uncertainty.validate(n)?;
        self.fault.validate()?;
        if self.fault.channels() != s {
            return Err(PlantError::Dimension(format!(
                "fault model covers {} channels, plant measures {s}",
                self.fault.channels()
            )));
        }
        if let Some(dim) = self.psi.dim() {
            if dim != n {
                return Err(PlantError::Dimension(format!(
                    "initial function has dimension {dim}, state has {n}"
                )));
            }
        }
        Ok(())
    }
}

/// Admissibility verdict for a descriptor pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub regular: bool,
    pub impulse_free: bool,
}

/// Decides regularity and impulse freeness of the pencil s E - A by sampling
/// its determinant at n+1 Chebyshev points and interpolating the degree-n
/// polynomial.
pub fn check_admissible(e: &Matrix, a: &Matrix) -> Result<AdmissibilityReport, PlantError> {
    if !e.is_square() || !a.is_square() || e.rows() != a.rows() {
        return Err(PlantError::Dimension(format!(
            "pencil needs square blocks of one size, got {}x{} and {}x{}",
            e.rows(),
            e.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let n = e.rows();
    let scale = e.max_abs().max(a.max_abs());
    if scale == 0.0 {
        return Ok(AdmissibilityReport {
            regular: false,
            impulse_free: false,
        });
    }
    let en = e.map(|v| v / scale);
    let an = a.map(|v| v / scale);

    let count = n + 1;
    let mut points = Vec::with_capacity(count);
    let mut samples = Vec::with_capacity(count);
    let mut max_sample = 0.0_f64;
    for k in 0..count {
        let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * count) as f64;
        let s = theta.cos();
        let det = determinant(&(&en.map(|v| v * s) - &an))?;
        max_sample = max_sample.max(det.abs());
        points.push(s);
        samples.push(det);
    }
    if max_sample < 1e-10 {
        return Ok(AdmissibilityReport {
            regular: false,
            impulse_free: false,
        });
    }

    // Interpolate the determinant polynomial and read off its degree.
    let vandermonde = Matrix::from_fn(count, count, |i, j| points[i].powi(j as i32));
    let rhs = Matrix::col_vec(&samples);
    let coeffs = solve_linear(&vandermonde, &rhs)?;
    let max_coeff = (0..count)
        .map(|j| coeffs[(j, 0)].abs())
        .fold(0.0_f64, f64::max);
    let degree = (0..count)
        .rev()
        .find(|&j| coeffs[(j, 0)].abs() > 1e-8 * max_coeff)
        .unwrap_or(0);

    let rank_e = rank_via_gram(e, None)?;
    Ok(AdmissibilityReport {
        regular: true,
        impulse_free: degree == rank_e,
    })
}
