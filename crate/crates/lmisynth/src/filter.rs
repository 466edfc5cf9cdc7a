//! Filter realizations and recovery from transformed synthesis variables.
//!
//! The synthesis program works in transformed filter variables. Recovery
//! inverts that transformation per rule: with W = I and U-bar = I - X Y^-1,
//! the gains follow from the transformed ones by two well-conditioned solves.
//! Conditioning of Y and of the coupling factor is reported per rule, and
//! recovery refuses to proceed below an rcond of 1e-10.

use crate::error::SynthError;
use matrixkit::{inverse, rcond, Matrix};

/// One fuzzy rule of a filter realization.
#[derive(Debug, Clone)]
pub struct FilterRule {
    /// State matrix.
    pub a_f: Matrix,
    /// Distributed-delay state matrix.
    pub a_tau_f: Matrix,
    /// Measurement input gain.
    pub b_f: Matrix,
    /// Estimate output matrix.
    pub e_f_out: Matrix,
    /// Delayed estimate output matrix.
    pub e_tau_f_out: Matrix,
    /// Measurement feedthrough of the estimate.
    pub d_f: Matrix,
}

/// Conditioning diagnostics of one rule's recovery.
#[derive(Debug, Clone, Copy)]
pub struct RecoveryDiagnostics {
    /// Reciprocal condition estimate of Y.
    pub rcond_y: f64,
    /// Reciprocal condition estimate of the coupling factor I - X Y^-1.
    pub rcond_coupling: f64,
}

/// A complete filter: one rule set sharing a descriptor.
#[derive(Debug, Clone)]
pub struct FilterRealization {
    /// Per-rule gains, same rule count as the plant.
    pub rules: Vec<FilterRule>,
    /// Filter descriptor, identity unless overridden.
    pub e_f: Matrix,
    /// Recovery diagnostics per rule; empty for hand-built filters.
    pub diagnostics: Vec<RecoveryDiagnostics>,
}

impl FilterRealization {
    /// Builds a filter from explicit rules with an identity descriptor.
    pub fn from_rules(rules: Vec<FilterRule>) -> Result<Self, SynthError> {
        if rules.is_empty() {
            return Err(SynthError::InvalidParameter("filter needs at least one rule".into()));
        }
        let n = rules[0].a_f.rows();
        for (k, r) in rules.iter().enumerate() {
            let checks: [(&str, usize, usize, &Matrix); 6] = [
                ("A_f", n, n, &r.a_f),
                ("A_tau_f", n, n, &r.a_tau_f),
                ("B_f", n, r.b_f.cols(), &r.b_f),
                ("E_f_out", r.e_f_out.rows(), n, &r.e_f_out),
                ("E_tau_f_out", r.e_f_out.rows(), n, &r.e_tau_f_out),
                ("D_f", r.e_f_out.rows(), r.b_f.cols(), &r.d_f),
            ];
            for (name, er, ec, m) in checks {
                if m.rows() != er || m.cols() != ec {
                    return Err(SynthError::Dimension(format!(
                        "filter rule {} block {name}: expected {er}x{ec}, got {}x{}",
                        k + 1,
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        Ok(Self { rules, e_f: Matrix::identity(n), diagnostics: Vec::new() })
    }

    /// The all-zero filter of matching dimensions, useful as a baseline.
    pub fn zero(state_dim: usize, sensor_dim: usize, output_dim: usize, rule_count: usize) -> Self {
        let rule = FilterRule {
            a_f: Matrix::zeros(state_dim, state_dim),
            a_tau_f: Matrix::zeros(state_dim, state_dim),
            b_f: Matrix::zeros(state_dim, sensor_dim),
            e_f_out: Matrix::zeros(output_dim, state_dim),
            e_tau_f_out: Matrix::zeros(output_dim, state_dim),
            d_f: Matrix::zeros(output_dim, sensor_dim),
        };
        Self {
            rules: vec![rule; rule_count],
            e_f: Matrix::identity(state_dim),
            diagnostics: Vec::new(),
        }
    }

    /// Filter state dimension.
    pub fn state_dim(&self) -> usize {
        self.e_f.rows()
    }

    /// Number of rules.
    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }
}

/// Transformed per-rule synthesis variables, ready for recovery.
#[derive(Debug, Clone)]
pub struct TildeVariables {
    pub x: Vec<Matrix>,
    pub y: Vec<Matrix>,
    pub a_f: Vec<Matrix>,
    pub a_tau_f: Vec<Matrix>,
    pub b_f: Vec<Matrix>,
    pub e_f_out: Vec<Matrix>,
    pub e_tau_f_out: Vec<Matrix>,
    pub d_f: Vec<Matrix>,
}

impl TildeVariables {
    fn rule_count(&self) -> Result<usize, SynthError> {
        let r = self.x.len();
        let all = [
            self.y.len(),
            self.a_f.len(),
            self.a_tau_f.len(),
            self.b_f.len(),
            self.e_f_out.len(),
            self.e_tau_f_out.len(),
            self.d_f.len(),
        ];
        if r == 0 || all.iter().any(|&l| l != r) {
            return Err(SynthError::Dimension(
                "transformed variable lists must share one rule count".into(),
            ));
        }
        Ok(r)
    }
}

/// Recovers filter gains from transformed variables.
///
/// Uses the factorization with W = I: the coupling factor is
/// U-bar = I - X Y^-1 and the left transform is U' = E' U-bar E^-1.
pub fn recover_filter(e: &Matrix, tilde: &TildeVariables) -> Result<FilterRealization, SynthError> {
    let r = tilde.rule_count()?;
    let n = e.rows();
    let rc_e = rcond(e)?;
    if rc_e < 1e-10 {
        return Err(SynthError::InvalidParameter(format!(
            "recovery needs a nonsingular descriptor, rcond {rc_e:.3e}"
        )));
    }
    let e_inv = inverse(e)?;
    let mut rules = Vec::with_capacity(r);
    let mut diagnostics = Vec::with_capacity(r);
    for i in 0..r {
        let y = &tilde.y[i];
        let rcond_y = rcond(y)?;
        if rcond_y < 1e-10 {
            return Err(SynthError::RecoveryDegenerate { rule: i + 1, rcond: rcond_y });
        }
        let y_inv = inverse(y)?;
        let u_bar = Matrix::identity(n) - tilde.x[i].matmul(&y_inv);
        let rcond_coupling = rcond(&u_bar)?;
        if rcond_coupling < 1e-10 {
            return Err(SynthError::RecoveryDegenerate { rule: i + 1, rcond: rcond_coupling });
        }
        let u_t = e.transpose().matmul(&u_bar).matmul(&e_inv);
        let u_t_inv = inverse(&u_t)?;
        rules.push(FilterRule {
            a_f: u_t_inv.matmul(&tilde.a_f[i]).matmul(&y_inv),
            a_tau_f: u_t_inv.matmul(&tilde.a_tau_f[i]).matmul(&y_inv),
            b_f: u_t_inv.matmul(&tilde.b_f[i]),
            e_f_out: tilde.e_f_out[i].matmul(&y_inv),
            e_tau_f_out: tilde.e_tau_f_out[i].matmul(&y_inv),
            d_f: tilde.d_f[i].clone(),
        });
        diagnostics.push(RecoveryDiagnostics { rcond_y, rcond_coupling });
    }
    Ok(FilterRealization { rules, e_f: Matrix::identity(n), diagnostics })
}

/// Applies the forward variable transformation to known filter gains,
/// producing the transformed variables recovery inverts. Used to validate
/// recovery round trips.
pub fn forward_transform(
    e: &Matrix,
    x: &[Matrix],
    y: &[Matrix],
    filter: &FilterRealization,
) -> Result<TildeVariables, SynthError> {
    let r = filter.rule_count();
    if x.len() != r || y.len() != r {
        return Err(SynthError::Dimension("X/Y lists must match the rule count".into()));
    }
    let e_inv = inverse(e)?;
    let mut tilde = TildeVariables {
        x: x.to_vec(),
        y: y.to_vec(),
        a_f: Vec::new(),
        a_tau_f: Vec::new(),
        b_f: Vec::new(),
        e_f_out: Vec::new(),
        e_tau_f_out: Vec::new(),
        d_f: Vec::new(),
    };
    for i in 0..r {
        let y_inv = inverse(&y[i])?;
        let u_bar = Matrix::identity(e.rows()) - x[i].matmul(&y_inv);
        let u_t = e.transpose().matmul(&u_bar).matmul(&e_inv);
        let rule = &filter.rules[i];
        tilde.a_f.push(u_t.matmul(&rule.a_f).matmul(&y[i]));
        tilde.a_tau_f.push(u_t.matmul(&rule.a_tau_f).matmul(&y[i]));
        tilde.b_f.push(u_t.matmul(&rule.b_f));
        tilde.e_f_out.push(rule.e_f_out.matmul(&y[i]));
        tilde.e_tau_f_out.push(rule.e_tau_f_out.matmul(&y[i]));
        tilde.d_f.push(rule.d_f.clone());
    }
    Ok(tilde)
}
