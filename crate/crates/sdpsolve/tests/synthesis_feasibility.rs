//! End-to-end solves of assembled filter-synthesis programs.

use lmisynth::{assemble_robust, assemble_synthesis, RobustEps, SynthesisOptions};
use plantmodel::{build_dc_motor, build_example1, dc_motor_uncertainty};
use sdpsolve::{minimize_objective, solve_feasibility, SolveOptions};

#[test]
fn benchmark_plant_is_feasible_at_half_gain() {
    let plant = build_example1().unwrap();
    let synth = assemble_synthesis(&plant, &SynthesisOptions::fixed_gamma(0.5)).unwrap();
    let res = solve_feasibility(&synth.problem, &SolveOptions::default()).unwrap();
    assert!(
        res.is_feasible(),
        "status {:?}, margin {}",
        res.status,
        res.margin
    );
    let filter = synth.extract_filter(&res.x).unwrap();
    assert_eq!(filter.rule_count(), 2);
    assert_eq!(filter.state_dim(), 2);
}

#[test]
fn benchmark_plant_minimized_gain_stays_small() {
    let plant = build_example1().unwrap();
    let synth = assemble_synthesis(&plant, &SynthesisOptions::default()).unwrap();
    let res = minimize_objective(&synth.problem, &SolveOptions::default()).unwrap();
    assert!(
        res.is_feasible(),
        "status {:?}, margin {}",
        res.status,
        res.margin
    );
    let gamma = synth.gamma_value(&res.x).unwrap();
    assert!(gamma <= 0.3255, "gamma {gamma}");
    synth.extract_filter(&res.x).unwrap();
}

#[test]
fn motor_plant_robust_program_is_feasible() {
    let plant = build_dc_motor(0.0).unwrap().plant;
    let synth = assemble_robust(
        &plant,
        &SynthesisOptions::fixed_gamma(1.5),
        RobustEps {
            eps1: 1.0,
            eps2: 1.0,
        },
    )
    .unwrap();
    let res = solve_feasibility(&synth.problem, &SolveOptions::default()).unwrap();
    assert!(
        res.is_feasible(),
        "status {:?}, margin {}",
        res.status,
        res.margin
    );
    synth.extract_filter(&res.x).unwrap();
}
