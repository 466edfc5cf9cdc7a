//! Scratch probe for synthesis-scale solves.

use lmisynth::{assemble_robust, RobustEps, SynthesisOptions};
use plantmodel::{build_dc_motor, dc_motor_uncertainty};
use sdpsolve::{solve_feasibility, SolveOptions};
use std::time::Instant;

fn main() {
    let mut plant = build_dc_motor(0.0).expect("motor").plant;
    plant.uncertainty = dc_motor_uncertainty();
    let pts = [1e-2, 1e-1, 1.0, 1e1, 1e2];
    for e1 in pts {
        for e2 in pts {
            let t0 = Instant::now();
            let synth = assemble_robust(
                &plant,
                &SynthesisOptions::fixed_gamma(1.5),
                RobustEps { eps1: e1, eps2: e2 },
            )
            .expect("assemble");
            let res = solve_feasibility(&synth.problem, &SolveOptions::default()).expect("solve");
            println!(
                "eps=({e1},{e2}): {:?} margin={:.4e} iters={} {:.1}s",
                res.status,
                res.margin,
                res.iterations,
                t0.elapsed().as_secs_f64()
            );
        }
    }
}
