//! Shared barrier derivative assembly and Newton step machinery.

use matrixkit::{cholesky, solve_cholesky, Matrix, SymmetricMatrix};

use crate::blocks::Block;

/// Barrier value, gradient, and Hessian accumulated over all blocks.
pub(crate) struct BarrierDerivs {
    /// `sum_c -log det S_c`.
    pub value: f64,
    /// Gradient of the barrier; the extra tail slot belongs to the margin
    /// variable when one is active.
    pub grad: Vec<f64>,
    /// Dense Hessian of the barrier, same indexing as the gradient.
    pub hess: Matrix,
}

/// Evaluates the barrier value alone; `None` when any block leaves the
/// positive-definite interior.
pub(crate) fn barrier_value(blocks: &[Block], x: &[f64], shift: f64) -> Option<f64> {
    let mut value = 0.0;
    for b in blocks {
        let s = b.eval(x, shift);
        let l = cholesky(&s).ok()?;
        value -= 2.0 * log_diag_sum(&l);
    }
    Some(value)
}

/// Accumulates barrier derivatives at `(x, shift)`.
///
/// Every block is evaluated as `S = G(x) - shift * I`. With `with_margin`
/// set, the shift is treated as the decision variable `t` occupying the last
/// gradient and Hessian slot.
pub(crate) fn barrier_derivs(
    blocks: &[Block],
    x: &[f64],
    shift: f64,
    n: usize,
    with_margin: bool,
) -> Option<BarrierDerivs> {
    let dim = n + usize::from(with_margin);
    let mut value = 0.0;
    let mut grad = vec![0.0; dim];
    let mut hess = Matrix::zeros(dim, dim);

    for b in blocks {
        let s = b.eval(x, shift);
        let l = cholesky(&s).ok()?;
        value -= 2.0 * log_diag_sum(&l);
        let sinv = chol_inverse(&l);

        let mut images: Vec<Matrix> = Vec::with_capacity(b.coeffs.len());
        for (k, entries) in &b.coeffs {
            grad[*k] -= trace_prod(&sinv, entries);
            images.push(curvature_image(&sinv, entries));
        }
        for (a, (k, _)) in b.coeffs.iter().enumerate() {
            let vk = &images[a];
            for (kl, entries_l) in b.coeffs.iter().skip(a) {
                let h = trace_prod(vk, entries_l);
                hess[(*k, *kl)] += h;
                if kl != k {
                    hess[(*kl, *k)] += h;
                }
            }
            if with_margin {
                let tr = trace_of(vk);
                hess[(*k, n)] -= tr;
                hess[(n, *k)] -= tr;
            }
        }
        if with_margin {
            grad[n] += trace_of(&sinv);
            hess[(n, n)] += frobenius_sq(&sinv);
        }
    }
    Some(BarrierDerivs { value, grad, hess })
}

/// Solves `H d = -g` with escalating diagonal regularization.
pub(crate) fn newton_direction(hess: &Matrix, grad: &[f64]) -> Option<Vec<f64>> {
    let dim = grad.len();
    let mut max_diag = 0.0f64;
    for i in 0..dim {
        max_diag = max_diag.max(hess[(i, i)].abs());
    }
    let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
    let mut reg = 1e-12 * (1.0 + max_diag);
    for _ in 0..4 {
        let h = SymmetricMatrix::from_fn_lower(dim, |i, j| {
            let v = 0.5 * (hess[(i, j)] + hess[(j, i)]);
            if i == j {
                v + reg
            } else {
                v
            }
        });
        if let Ok(l) = cholesky(&h) {
            return Some(solve_cholesky(&l, &rhs));
        }
        reg *= 100.0;
    }
    None
}

/// Sum of the logs of the Cholesky pivot diagonal.
fn log_diag_sum(l: &Matrix) -> f64 {
    let mut sum = 0.0;
    for i in 0..l.rows() {
        sum += l[(i, i)].ln();
    }
    sum
}

/// Inverts a matrix from its lower Cholesky factor.
fn chol_inverse(l: &Matrix) -> Matrix {
    let d = l.rows();
    let mut inv = Matrix::zeros(d, d);
    let mut e = vec![0.0; d];
    for j in 0..d {
        e[j] = 1.0;
        let col = solve_cholesky(l, &e);
        e[j] = 0.0;
        for i in 0..d {
            inv[(i, j)] = col[i];
        }
    }
    inv
}

/// `tr(M * F)` where `F` is given by signed lower triplets.
fn trace_prod(m: &Matrix, entries: &[(usize, usize, f64)]) -> f64 {
    let mut sum = 0.0;
    for &(r, c, v) in entries {
        let weight = if r == c { 1.0 } else { 2.0 };
        sum += weight * v * m[(r, c)];
    }
    sum
}

/// `S^{-1} F S^{-1}` assembled from the sparse triplets of `F`.
fn curvature_image(sinv: &Matrix, entries: &[(usize, usize, f64)]) -> Matrix {
    let d = sinv.rows();
    let mut out = Matrix::zeros(d, d);
    for &(r, c, v) in entries {
        for i in 0..d {
            let sir = sinv[(i, r)];
            let sic = sinv[(i, c)];
            for j in 0..d {
                let mut acc = sir * sinv[(c, j)];
                if r != c {
                    acc += sic * sinv[(r, j)];
                }
                out[(i, j)] += v * acc;
            }
        }
    }
    out
}

/// Trace of a square matrix.
fn trace_of(m: &Matrix) -> f64 {
    let mut sum = 0.0;
    for i in 0..m.rows() {
        sum += m[(i, i)];
    }
    sum
}

/// Squared Frobenius norm.
fn frobenius_sq(m: &Matrix) -> f64 {
    m.data().iter().map(|v| v * v).sum()
}
