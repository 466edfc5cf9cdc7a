use crate::delay::{DelayGenerator, DelaySpec};
use crate::error::PlantError;
use crate::fault::SensorFaultModel;
use crate::membership::{MembershipEvaluator, MembershipModel};
use crate::plant::{FuzzyPlant, FuzzyRule, InitialFunction};
use crate::uncertainty::UncertaintyStructure;
use matrixkit::Matrix;

/// Physical constants of the bundled DC motor.
#[derive(Debug, Clone, Copy)]
pub struct MotorParameters {
    /// Rotor inertia, kg m^2.
    pub inertia: f64,
    /// Viscous damping, N m s / rad.
    pub damping: f64,
    /// Armature inductance, mH.
    pub inductance_mh: f64,
    /// Torque constant, N m / A.
    pub torque_constant: f64,
    /// Back-EMF constant, V s / rad.
    pub back_emf: f64,
}

pub const MOTOR_PARAMETERS: MotorParameters = MotorParameters {
    inertia: 0.082,
    damping: 0.3,
    inductance_mh: 1000.0,
    torque_constant: 0.576,
    back_emf: 0.612,
};

/// DC motor model pair: the continuous sector-nonlinearity plant and the
/// companion parameter set printed alongside it.
#[derive(Debug, Clone)]
pub struct DcMotorModel {
    pub parameters: MotorParameters,
    pub plant: FuzzyPlant,
    pub companion: FuzzyPlant,
}

fn motor_shared_blocks() -> (Vec<Matrix>, Vec<Matrix>, Vec<Matrix>, Vec<Matrix>) {
    let a_d = vec![
        Matrix::from_rows(&[vec![-0.1, 0.05], vec![-0.5, -0.75]]).unwrap(),
        Matrix::from_rows(&[vec![-0.9, 0.0], vec![-1.15, -1.25]]).unwrap(),
    ];
    let c = vec![
        Matrix::row_vec(&[-3.0, 0.5]),
        Matrix::row_vec(&[1.5, 2.0]),
    ];
    let e_out = vec![
        Matrix::row_vec(&[0.2, 1.0]),
        Matrix::row_vec(&[0.3, 1.0]),
    ];
    let e_dout = vec![
        Matrix::row_vec(&[-0.1, 0.0]),
        Matrix::row_vec(&[0.0, 0.2]),
    ];
    (a_d, c, e_out, e_dout)
}

/// Default delay specification for the DC motor: a short network delay near
/// 10 ms active 15% of the time, a long branch below 100 ms, and a filter
/// delay around 150 ms.
pub fn dc_motor_delays() -> DelaySpec {
    let d_big = 0.1;
    let mu2 = 0.4;
    DelaySpec {
        d_m: 0.008,
        d_0: 0.012,
        d_big,
        sigma: [0.2, mu2, 0.04 * std::f64::consts::PI],
        tau_bar: 0.23,
        delta0: 0.15,
        gen_d1: DelayGenerator::Sinusoid {
            center: 0.01,
            amplitude: 0.002,
            omega: std::f64::consts::FRAC_PI_2,
            phase: 0.0,
        },
        gen_d2: DelayGenerator::Sinusoid {
            center: d_big / 2.0,
            amplitude: 0.012 / 2.0,
            omega: 2.0 * mu2 / d_big,
            phase: 0.0,
        },
        gen_tau: DelayGenerator::Sinusoid {
            center: 0.15,
            amplitude: 0.08,
            omega: std::f64::consts::FRAC_PI_2,
            phase: 0.0,
        },
        delta_resample: 0.1,
    }
}

/// Rank-one uncertainty channel for the DC motor's perturbed variant.
pub fn dc_motor_uncertainty() -> UncertaintyStructure {
    let shaping = [
        [0.0, 0.6],
        [0.3, 0.4],
        [0.4, 0.5],
        [0.5, 0.6],
        [0.15, 0.25],
        [0.25, 0.35],
        [0.35, 0.45],
        [0.45, 0.55],
    ];
    UncertaintyStructure {
        m: Matrix::col_vec(&[-0.6, 0.5]),
        n: shaping.iter().map(|row| Matrix::row_vec(row)).collect(),
        l: Matrix::zeros(1, 1),
        enabled: true,
    }
}

/// Builds the two-rule DC motor plant. The sector split covers the armature
/// current range x1 in [-3, 3]; `b_amplitude` sets the back-EMF perturbation
/// inside its unit band.
pub fn build_dc_motor(b_amplitude: f64) -> Result<DcMotorModel, PlantError> {
    if b_amplitude.abs() > 1.0 {
        return Err(PlantError::InvalidBound(format!(
            "back-EMF perturbation must lie in [-1, 1], got {b_amplitude}"
        )));
    }
    let p = MOTOR_PARAMETERS;
    let coupling = -(p.back_emf + 0.06 * b_amplitude);
    let row2 = [p.torque_constant / p.inertia, -p.damping / p.inertia];
    let (a_d, c, e_out, e_dout) = motor_shared_blocks();

    let sector_a = [
        Matrix::from_rows(&[vec![-4.0, coupling], vec![row2[0], row2[1]]]).unwrap(),
        Matrix::from_rows(&[vec![-13.0, coupling], vec![row2[0], row2[1]]]).unwrap(),
    ];
    let sector_b = Matrix::col_vec(&[0.0, -1.0 / p.inertia]);
    let companion_a = [
        Matrix::from_rows(&[vec![0.8, -0.0306], vec![0.3512, 0.8171]]).unwrap(),
        Matrix::from_rows(&[vec![0.35, -0.0306], vec![0.3512, 0.8171]]).unwrap(),
    ];
    let companion_b = Matrix::col_vec(&[0.0, -0.05 / p.inertia]);

    let rules = |a_pair: &[Matrix; 2], b: &Matrix| -> Vec<FuzzyRule> {
        (0..2)
            .map(|i| FuzzyRule {
                a: a_pair[i].clone(),
                a_d: a_d[i].clone(),
                b: b.clone(),
                c: c[i].clone(),
                e_out: e_out[i].clone(),
                e_dout: e_dout[i].clone(),
            })
            .collect()
    };
    let membership = MembershipModel {
        evaluator: MembershipEvaluator::SectorX1Squared { x1_max: 3.0 },
        rho: vec![100.0, 100.0],
    };
    let build = |a_pair: &[Matrix; 2], b: &Matrix| -> Result<FuzzyPlant, PlantError> {
        FuzzyPlant::new(
            Matrix::identity(2),
            rules(a_pair, b),
            membership.clone(),
            dc_motor_delays(),
            UncertaintyStructure::disabled(2),
            SensorFaultModel::constant(1, 0.5),
            InitialFunction::Constant(vec![0.5, -0.3]),
        )
    };
    Ok(DcMotorModel {
        parameters: p,
        plant: build(&sector_a, &sector_b)?,
        companion: build(&companion_a, &companion_b)?,
    })
}

/// Delay specification used by the benchmark plant: an even switch between
/// the lower and upper halves of the band `[0, d_upper]`, with all rate
/// bounds at 0.2 and the retarded filter channel sharing the upper bound.
pub fn example1_delays(d_upper: f64) -> DelaySpec {
    let sigma = 0.2;
    let split = d_upper / 2.0;
    DelaySpec {
        d_m: 0.005,
        d_0: split,
        d_big: d_upper,
        sigma: [sigma, sigma, sigma],
        tau_bar: d_upper,
        delta0: 0.5,
        gen_d1: DelayGenerator::sinusoid_in_band(0.005, split, sigma),
        gen_d2: DelayGenerator::sinusoid_in_band(1.001 * split, d_upper, sigma),
        gen_tau: DelayGenerator::sinusoid_in_band(0.0, d_upper, sigma),
        delta_resample: 0.1,
    }
}

/// Two-rule benchmark plant with a nonsingular descriptor, used for delay
/// margin comparisons. The delay band defaults to an upper bound of 0.5 s.
pub fn build_example1() -> Result<FuzzyPlant, PlantError> {
    let rules = vec![
        FuzzyRule {
            a: Matrix::from_rows(&[vec![-2.1, 0.1], vec![1.0, -2.0]]).unwrap(),
            a_d: Matrix::from_rows(&[vec![-1.1, 0.1], vec![-0.8, -0.9]]).unwrap(),
            b: Matrix::col_vec(&[1.0, -0.2]),
            c: Matrix::row_vec(&[1.0, 0.0]),
            e_out: Matrix::row_vec(&[1.0, -0.5]),
            e_dout: Matrix::row_vec(&[0.0, 0.0]),
        },
        FuzzyRule {
            a: Matrix::from_rows(&[vec![-1.9, 0.0], vec![-0.2, -1.1]]).unwrap(),
            a_d: Matrix::from_rows(&[vec![-0.9, 0.0], vec![-1.1, -1.2]]).unwrap(),
            b: Matrix::col_vec(&[0.3, 0.1]),
            c: Matrix::row_vec(&[0.5, -0.6]),
            e_out: Matrix::row_vec(&[-0.2, 0.3]),
            e_dout: Matrix::row_vec(&[0.0, 0.0]),
        },
    ];
    FuzzyPlant::new(
        Matrix::identity(2),
        rules,
        MembershipModel {
            evaluator: MembershipEvaluator::SectorX1Squared { x1_max: 3.0 },
            rho: vec![100.0, 100.0],
        },
        example1_delays(0.5),
        UncertaintyStructure::disabled(2),
        SensorFaultModel::healthy(1),
        InitialFunction::Constant(vec![0.0, 0.0]),
    )
}
