use matrixkit::{
    assemble_symmetric, determinant, is_negative_definite, kron, solve_linear, sym_eig,
    BlockLayout, Matrix, SymmetricMatrix,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_fn_lower(dim, |_, _| rng.gen_range(-5.0..5.0))
}

#[test]
fn eigendecomposition_reconstructs_across_seeds_and_dims() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 2 + (seed as usize) % 11;
        let m = random_symmetric(&mut rng, dim);
        let dense = m.to_matrix();
        let (vals, vecs) = sym_eig(&m).unwrap();
        let lambda = Matrix::from_diag(&vals);
        let rebuilt = vecs.matmul(&lambda).matmul(&vecs.transpose());
        let tol = 1e-10 * dense.norm_fro().max(1.0);
        assert!(
            rebuilt.max_abs_diff(&dense) < tol,
            "seed {seed} dim {dim}: reconstruction error above {tol}"
        );
        let gram = vecs.transpose().matmul(&vecs);
        assert!(gram.max_abs_diff(&Matrix::identity(dim)) < 1e-12);
    }
}

#[test]
fn negation_flips_the_spectrum() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let dim = 2 + (seed as usize) % 11;
        let m = random_symmetric(&mut rng, dim);
        let (vals, _) = sym_eig(&m).unwrap();
        let (neg_vals, _) = sym_eig(&-&m).unwrap();
        for k in 0..dim {
            let expect = -vals[dim - 1 - k];
            assert!(
                (neg_vals[k] - expect).abs() < 1e-10 * (1.0 + expect.abs()),
                "seed {seed}: eigenvalue {k} mismatch"
            );
        }
    }
}

/// Sylvester criterion for negative definiteness of a 3x3 symmetric matrix:
/// leading principal minors alternate in sign starting negative.
fn negative_definite_by_minors(m: &Matrix) -> bool {
    let d1 = m[(0, 0)];
    let d2 = determinant(&m.block(0, 0, 2, 2)).unwrap();
    let d3 = determinant(m).unwrap();
    d1 < 0.0 && d2 > 0.0 && d3 < 0.0
}

#[test]
fn definiteness_agrees_with_minor_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    while checked < 200 {
        let m = random_symmetric(&mut rng, 3);
        let dense = m.to_matrix();
        let (vals, _) = sym_eig(&m).unwrap();
        // Skip matrices too close to the definiteness boundary for the two
        // tests to make an honest comparison.
        if vals.iter().any(|v| v.abs() < 1e-6) {
            continue;
        }
        let via_eig = is_negative_definite(&m, 0.0).unwrap();
        let via_minors = negative_definite_by_minors(&dense);
        assert_eq!(via_eig, via_minors, "disagreement on {dense:?}");
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_residual_stays_within_bound(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(2..8usize);
        let a = Matrix::from_fn(dim, dim, |_, _| rng.gen_range(-3.0..3.0));
        let b = Matrix::from_fn(dim, 2, |_, _| rng.gen_range(-3.0..3.0));
        match solve_linear(&a, &b) {
            Ok(x) => {
                let resid = (&b - &a.matmul(&x)).norm_fro();
                let bound = 1e-8 * (a.norm_fro() * x.norm_fro() + b.norm_fro());
                prop_assert!(resid <= bound, "residual {} above {}", resid, bound);
            }
            Err(_) => {
                // Random square matrices are occasionally near singular; the
                // refusal path is exercised by unit tests.
            }
        }
    }

    #[test]
    fn kron_entries_match_index_formula(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix::from_fn(3, 2, |_, _| rng.gen_range(-2.0..2.0));
        let b = Matrix::from_fn(2, 4, |_, _| rng.gen_range(-2.0..2.0));
        let k = kron(&a, &b);
        prop_assert_eq!(k.rows(), 6);
        prop_assert_eq!(k.cols(), 8);
        for i in 0..6 {
            for j in 0..8 {
                let expect = a[(i / 2, j / 4)] * b[(i % 2, j % 4)];
                prop_assert_eq!(k[(i, j)], expect);
            }
        }
    }

    #[test]
    fn symmetric_assembly_is_bit_exact(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = [rng.gen_range(1..4usize), rng.gen_range(1..4usize), rng.gen_range(1..4usize)];
        let layout = BlockLayout::square(&sizes);
        let d0 = random_symmetric(&mut rng, sizes[0]).to_matrix();
        let d2 = random_symmetric(&mut rng, sizes[2]).to_matrix();
        let off01 = Matrix::from_fn(sizes[0], sizes[1], |_, _| rng.gen_range(-1.0..1.0));
        let off12 = Matrix::from_fn(sizes[1], sizes[2], |_, _| rng.gen_range(-1.0..1.0));
        let out = assemble_symmetric(
            &layout,
            &[(0, 0, &d0), (2, 2, &d2), (0, 1, &off01), (1, 2, &off12)],
        )
        .unwrap();
        let t = out.transpose();
        prop_assert_eq!(out.data(), t.data());
    }
}
