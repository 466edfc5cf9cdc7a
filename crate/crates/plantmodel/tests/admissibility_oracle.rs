//! Cross-checks the sampled-determinant admissibility test against an exact
//! symbolic oracle: the pencil determinant expanded by cofactors over
//! degree-one polynomial entries.

use matrixkit::{mgs_qr, Matrix};
use plantmodel::check_admissible;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Poly = Vec<f64>;

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (k, &v) in a.iter().enumerate() {
        out[k] += v;
    }
    for (k, &v) in b.iter().enumerate() {
        out[k] += v;
    }
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_scale(a: &Poly, s: f64) -> Poly {
    a.iter().map(|v| v * s).collect()
}

/// Determinant of a matrix of polynomials by Laplace expansion on row 0.
fn poly_det(entries: &[Vec<Poly>]) -> Poly {
    let n = entries.len();
    if n == 1 {
        return entries[0][0].clone();
    }
    let mut acc = vec![0.0];
    for j in 0..n {
        let minor: Vec<Vec<Poly>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| entries[i][c].clone())
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = poly_mul(&entries[0][j], &poly_det(&minor));
        acc = poly_add(&acc, &poly_scale(&term, sign));
    }
    acc
}

/// Exact regularity and impulse-freeness from the symbolic determinant and
/// the constructed rank of E.
fn oracle(e: &Matrix, a: &Matrix, rank_e: usize) -> (bool, bool) {
    let n = e.rows();
    let entries: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| vec![-a[(i, j)], e[(i, j)]])
                .collect()
        })
        .collect();
    let det = poly_det(&entries);
    let max_coeff = det.iter().fold(0.0_f64, |m, &c| m.max(c.abs()));
    if max_coeff < 1e-9 {
        return (false, false);
    }
    let degree = det
        .iter()
        .enumerate()
        .rev()
        .find(|(_, c)| c.abs() > 1e-9 * max_coeff)
        .map(|(k, _)| k)
        .unwrap_or(0);
    (true, degree == rank_e)
}

fn random_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let gauss = Matrix::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
        if let Ok((q, _)) = mgs_qr(&gauss) {
            return q;
        }
    }
}

/// Descriptor matrix with exactly the requested rank, built from orthogonal
/// factors and a controlled singular value profile.
fn descriptor_with_rank(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let q1 = random_orthogonal(dim, rng);
    let q2 = random_orthogonal(dim, rng);
    let d: Vec<f64> = (0..dim)
        .map(|k| if k < rank { rng.gen_range(0.5..2.0) } else { 0.0 })
        .collect();
    q1.matmul(&Matrix::from_diag(&d)).matmul(&q2.transpose())
}

#[test]
fn sampled_test_matches_the_symbolic_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut disagreements = Vec::new();
    for trial in 0..100 {
        let n = 2 + trial % 3;
        let rank = if trial % 2 == 0 { n } else { n - 1 };
        let e = descriptor_with_rank(n, rank, &mut rng);
        let a = Matrix::from_fn(n, n, |_, _| rng.gen_range(-2.0..2.0));
        let report = check_admissible(&e, &a).unwrap();
        let (regular, impulse_free) = oracle(&e, &a, rank);
        if report.regular != regular || report.impulse_free != impulse_free {
            disagreements.push(format!(
                "trial {trial}: got ({}, {}), oracle says ({regular}, {impulse_free})",
                report.regular, report.impulse_free
            ));
        }
    }
    assert!(
        disagreements.is_empty(),
        "{} disagreements:\n{}",
        disagreements.len(),
        disagreements.join("\n")
    );
}
