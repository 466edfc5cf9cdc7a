//! Solver verdicts checked against analytic eigenvalue thresholds on random
//! scalar-variable pencil problems.

use lmisynth::{AffineConstraint, LmiProblem, Sense, SparseSym, VarShape, VariableRegistry};
use matrixkit::{sym_eig, Matrix, SymmetricMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdpsolve::{minimize_objective, solve_feasibility, SolveOptions};

fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let m = Matrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    SymmetricMatrix::symmetrize(&m).to_matrix()
}

fn random_spd(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let m = Matrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    let mut g = m.matmul_transpose(&m).scale(1.0 / dim as f64);
    for i in 0..dim {
        g[(i, i)] += 0.4;
    }
    g
}

/// Largest generalized eigenvalue of the pencil (A, B) with B positive
/// definite, computed as the largest eigenvalue of B^{-1/2} A B^{-1/2}.
fn pencil_threshold(a: &Matrix, b: &Matrix) -> f64 {
    let (vals, vecs) = sym_eig(&SymmetricMatrix::symmetrize(b)).unwrap();
    let inv_sqrt: Vec<f64> = vals.iter().map(|v| 1.0 / v.sqrt()).collect();
    let b_inv_half = vecs
        .matmul(&Matrix::from_diag(&inv_sqrt))
        .matmul_transpose(&vecs);
    let m = b_inv_half.matmul(a).matmul(&b_inv_half);
    let (gvals, _) = sym_eig(&SymmetricMatrix::symmetrize(&m)).unwrap();
    gvals[0]
}

/// Problem `x * B - A ⪰ 0` over one scalar variable, optionally minimizing x.
fn pencil_problem(a: &Matrix, b: &Matrix, minimize: bool) -> LmiProblem {
    let mut reg = VariableRegistry::new();
    reg.add("x", VarShape::Scalar, false).unwrap();
    let dim = a.rows();
    LmiProblem {
        registry: reg,
        constraints: vec![AffineConstraint {
            name: "pencil".into(),
            sense: Sense::PositiveDefinite,
            dim,
            f0: SparseSym::from_dense(&a.scale(-1.0)),
            coeffs: vec![(0, SparseSym::from_dense(b))],
            tag: "pencil".into(),
        }],
        objective: minimize.then(|| vec![(0, 1.0)]),
    }
}

/// Constant problem `F0 ⪰ 0` alongside an inert scalar variable, used to
/// probe the feasibility verdict at a frozen pencil point.
fn frozen_problem(f0: &Matrix) -> LmiProblem {
    let mut reg = VariableRegistry::new();
    reg.add("slack", VarShape::Scalar, false).unwrap();
    LmiProblem {
        registry: reg,
        constraints: vec![AffineConstraint {
            name: "frozen".into(),
            sense: Sense::PositiveDefinite,
            dim: f0.rows(),
            f0: SparseSym::from_dense(f0),
            coeffs: vec![],
            tag: "frozen".into(),
        }],
        objective: None,
    }
}

#[test]
fn fifty_random_pencils_match_generalized_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let opts = SolveOptions::default();
    for case in 0..50u64 {
        let dim = 2 + (case as usize % 5);
        let a = random_symmetric(&mut rng, dim);
        let b = random_spd(&mut rng, dim);
        let expected = pencil_threshold(&a, &b);

        let res = minimize_objective(&pencil_problem(&a, &b, true), &opts).unwrap();
        assert!(res.is_feasible(), "case {case}: status {:?}", res.status);
        let got = res.objective.unwrap();
        assert!(
            (got - expected).abs() <= 1e-5,
            "case {case}: threshold {got} expected {expected}"
        );

        let above = b.scale(expected + 1e-2) - a.clone();
        let below = b.scale(expected - 1e-2) - a.clone();
        let res_above = solve_feasibility(&frozen_problem(&above), &opts).unwrap();
        let res_below = solve_feasibility(&frozen_problem(&below), &opts).unwrap();
        assert!(res_above.is_feasible(), "case {case} above threshold");
        assert!(!res_below.is_feasible(), "case {case} below threshold");
    }
}

#[test]
fn twenty_identity_pencils_recover_largest_eigenvalue() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let opts = SolveOptions::default();
    for case in 0..20u64 {
        let dim = 2 + (case as usize % 5);
        let a = random_symmetric(&mut rng, dim).scale(2.0);
        let (vals, _) = sym_eig(&SymmetricMatrix::symmetrize(&a)).unwrap();
        let expected = vals[0];

        let res = minimize_objective(&pencil_problem(&a, &Matrix::identity(dim), true), &opts)
            .unwrap();
        assert!(res.is_feasible(), "case {case}: status {:?}", res.status);
        let got = res.objective.unwrap();
        assert!(
            (got - expected).abs() <= 1e-5,
            "case {case}: minimum {got} expected {expected}"
        );
    }
}

#[test]
fn medium_instance_solves_are_bitwise_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_symmetric(&mut rng, 6);
    let b = random_spd(&mut rng, 6);
    let opts = SolveOptions::default();

    let feas = pencil_problem(&a, &b, false);
    let f1 = solve_feasibility(&feas, &opts).unwrap();
    let f2 = solve_feasibility(&feas, &opts).unwrap();
    assert_eq!(f1.iterations, f2.iterations);
    assert_eq!(f1.status, f2.status);
    assert_eq!(f1.margin.to_bits(), f2.margin.to_bits());
    for (p, q) in f1.x.iter().zip(&f2.x) {
        assert_eq!(p.to_bits(), q.to_bits());
    }

    let min = pencil_problem(&a, &b, true);
    let m1 = minimize_objective(&min, &opts).unwrap();
    let m2 = minimize_objective(&min, &opts).unwrap();
    assert_eq!(m1.iterations, m2.iterations);
    assert_eq!(
        m1.objective.unwrap().to_bits(),
        m2.objective.unwrap().to_bits()
    );
    for (p, q) in m1.x.iter().zip(&m2.x) {
        assert_eq!(p.to_bits(), q.to_bits());
    }
}
