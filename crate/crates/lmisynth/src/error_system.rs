//! Augmented plant-filter error system.
//!
//! Stacks the plant state with the filter state and expresses the estimation
//! error dynamics in one descriptor system. The interval indicator can be
//! folded in expectation (its mean replaces it) or held at one branch.

use crate::error::SynthError;
use crate::filter::FilterRealization;
use matrixkit::Matrix;
use plantmodel::FuzzyPlant;

/// How the two-interval indicator enters the averaged dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMode {
    /// Replace the indicator by its mean: first interval weight delta0.
    Expectation(f64),
    /// Hold the indicator at one branch (true = first interval active).
    Indicator(bool),
}

impl DeltaMode {
    /// Weights (first interval, second interval).
    pub fn weights(&self) -> (f64, f64) {
        match *self {
            DeltaMode::Expectation(d0) => (d0, 1.0 - d0),
            DeltaMode::Indicator(true) => (1.0, 0.0),
            DeltaMode::Indicator(false) => (0.0, 1.0),
        }
    }
}

/// The augmented error system for one (plant rule, filter rule) pair.
#[derive(Debug, Clone)]
pub struct ErrorSystem {
    /// Augmented descriptor diag(E, E_f).
    pub e: Matrix,
    /// Augmented state matrix.
    pub a: Matrix,
    /// First-interval delayed state matrix (indicator weight applied).
    pub a_d1: Matrix,
    /// Second-interval delayed state matrix.
    pub a_d2: Matrix,
    /// Filter-delay state matrix.
    pub a_tau: Matrix,
    /// Disturbance input.
    pub b: Matrix,
    /// Error output on the instantaneous state.
    pub c_out: Matrix,
    /// Error output on the first-interval delayed state.
    pub c_d1: Matrix,
    /// Error output on the second-interval delayed state.
    pub c_d2: Matrix,
    /// Error output on the filter-delayed state.
    pub c_tau: Matrix,
    /// Indicator treatment baked into the matrices above.
    pub delta_mode: DeltaMode,
}

impl ErrorSystem {
    /// Augmented state dimension.
    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

fn expect_dims(name: &str, m: &Matrix, r: usize, c: usize) -> Result<(), SynthError> {
    if m.rows() != r || m.cols() != c {
        return Err(SynthError::Dimension(format!(
            "block {name}: expected {r}x{c}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Builds the augmented error system for plant rule `rule_plant` paired with
/// filter rule `rule_filter`, a fixed sensor gain `beta`, and an indicator
/// treatment. A zero filter leaves the plant output as the error output.
pub fn build_error_system(
    plant: &FuzzyPlant,
    filter: &FilterRealization,
    rule_plant: usize,
    rule_filter: usize,
    beta: &Matrix,
    mode: DeltaMode,
) -> Result<ErrorSystem, SynthError> {
    let n = plant.state_dim();
    let q = plant.disturbance_dim();
    let s = plant.sensor_dim();
    let m = plant.output_dim();
    if rule_plant >= plant.rule_count() {
        return Err(SynthError::InvalidParameter(format!(
            "plant rule index {rule_plant} out of range (rule count {})",
            plant.rule_count()
        )));
    }
    if rule_filter >= filter.rule_count() {
        return Err(SynthError::InvalidParameter(format!(
            "filter rule index {rule_filter} out of range (rule count {})",
            filter.rule_count()
        )));
    }
    if let DeltaMode::Expectation(d0) = mode {
        if !(0.0..=1.0).contains(&d0) {
            return Err(SynthError::InvalidParameter(format!(
                "interval weight {d0} must lie in [0, 1]"
            )));
        }
    }
    let pr = &plant.rules[rule_plant];
    let fr = &filter.rules[rule_filter];
    let nf = filter.state_dim();
    if nf != n {
        return Err(SynthError::Dimension(format!(
            "block E_f: filter state dim {nf} must equal plant state dim {n}"
        )));
    }
    expect_dims("beta", beta, s, s)?;
    expect_dims("A_f", &fr.a_f, n, n)?;
    expect_dims("A_tau_f", &fr.a_tau_f, n, n)?;
    expect_dims("B_f", &fr.b_f, n, s)?;
    expect_dims("E_f_out", &fr.e_f_out, m, n)?;
    expect_dims("E_tau_f_out", &fr.e_tau_f_out, m, n)?;
    expect_dims("D_f", &fr.d_f, m, s)?;

    let (w1, w2) = mode.weights();
    let dim = 2 * n;
    let bc = fr.b_f.matmul(beta).matmul(&pr.c);

    let mut a = Matrix::zeros(dim, dim);
    a.set_block(0, 0, &pr.a);
    a.set_block(n, 0, &bc);
    a.set_block(n, n, &fr.a_f);

    let mut a_d1 = Matrix::zeros(dim, dim);
    a_d1.add_block_scaled(0, 0, &pr.a_d, w1);
    let mut a_d2 = Matrix::zeros(dim, dim);
    a_d2.add_block_scaled(0, 0, &pr.a_d, w2);

    let mut a_tau = Matrix::zeros(dim, dim);
    a_tau.set_block(n, n, &fr.a_tau_f);

    let mut b = Matrix::zeros(dim, q);
    b.set_block(0, 0, &pr.b);

    let mut c_out = Matrix::zeros(m, dim);
    c_out.set_block(0, 0, &(pr.e_out.clone() + fr.d_f.matmul(beta).matmul(&pr.c)));
    c_out.add_block_scaled(0, n, &fr.e_f_out, -1.0);

    let mut c_d1 = Matrix::zeros(m, dim);
    c_d1.add_block_scaled(0, 0, &pr.e_dout, w1);
    let mut c_d2 = Matrix::zeros(m, dim);
    c_d2.add_block_scaled(0, 0, &pr.e_dout, w2);

    let mut c_tau = Matrix::zeros(m, dim);
    c_tau.add_block_scaled(0, n, &fr.e_tau_f_out, -1.0);

    let mut e = Matrix::zeros(dim, dim);
    e.set_block(0, 0, &plant.e);
    e.set_block(n, n, &filter.e_f);

    Ok(ErrorSystem {
        e,
        a,
        a_d1,
        a_d2,
        a_tau,
        b,
        c_out,
        c_d1,
        c_d2,
        c_tau,
        delta_mode: mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use plantmodel::build_example1;

    #[test]
    fn zero_filter_keeps_plant_output() {
        let plant = build_example1().unwrap();
        let filt = FilterRealization::zero(2, 1, 1, 2);
        let sys = build_error_system(
            &plant,
            &filt,
            0,
            0,
            &plant.fault.midpoint(),
            DeltaMode::Expectation(0.5),
        )
        .unwrap();
        assert_eq!(sys.dim(), 4);
        let expect = Matrix::from_rows(&[vec![1.0, -0.5, 0.0, 0.0]]).unwrap();
        assert_eq!(sys.c_out.max_abs_diff(&expect), 0.0);
        assert_eq!(sys.c_tau.max_abs(), 0.0);
    }

    #[test]
    fn expectation_weights_split_the_delay_matrix() {
        let plant = build_example1().unwrap();
        let filt = FilterRealization::zero(2, 1, 1, 2);
        let sys = build_error_system(
            &plant,
            &filt,
            1,
            1,
            &plant.fault.midpoint(),
            DeltaMode::Expectation(0.3),
        )
        .unwrap();
        let sum = sys.a_d1.clone() + sys.a_d2.clone();
        let mut expect = Matrix::zeros(4, 4);
        expect.set_block(0, 0, &plant.rules[1].a_d);
        assert!(sum.max_abs_diff(&expect) < 1e-15);
        assert!((sys.a_d1[(0, 0)] - 0.3 * plant.rules[1].a_d[(0, 0)]).abs() < 1e-15);
    }

    #[test]
    fn indicator_branches_zero_one_side() {
        let plant = build_example1().unwrap();
        let filt = FilterRealization::zero(2, 1, 1, 2);
        let sys = build_error_system(
            &plant,
            &filt,
            0,
            0,
            &plant.fault.midpoint(),
            DeltaMode::Indicator(false),
        )
        .unwrap();
        assert_eq!(sys.a_d1.max_abs(), 0.0);
        assert!(sys.a_d2.max_abs() > 0.0);
    }

    #[test]
    fn bad_beta_dims_name_the_block() {
        let plant = build_example1().unwrap();
        let filt = FilterRealization::zero(2, 1, 1, 2);
        let err = build_error_system(
            &plant,
            &filt,
            0,
            0,
            &Matrix::identity(3),
            DeltaMode::Expectation(0.5),
        )
        .unwrap_err();
        assert!(err.to_string().contains("beta"));
    }
}
