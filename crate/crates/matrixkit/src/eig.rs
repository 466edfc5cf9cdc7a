use crate::dense::Matrix;
use crate::error::MatError;
use crate::sym::SymmetricMatrix;

/// Iteration cap per eigenvalue in the implicit QL sweep. The classical
/// algorithm converges in a handful of iterations; hitting the cap signals a
/// genuinely pathological input.
const QL_ITERATION_CAP: usize = 60;

/// Symmetric eigendecomposition via Householder tridiagonalization followed
/// by implicit QL with Wilkinson shifts.
///
/// Returns eigenvalues sorted descending and the matching orthonormal
/// eigenvectors as matrix columns, so `M = V diag(vals) V^T` up to a
/// reconstruction error of 1e-10 * max(1, ||M||_F).
pub fn sym_eig(m: &SymmetricMatrix) -> Result<(Vec<f64>, Matrix), MatError> {
    let n = m.dim();
    let mut v = m.to_matrix();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;

    // Sort eigenpairs descending by eigenvalue, permuting eigenvector columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

/// True iff the largest eigenvalue is strictly below `-margin`.
pub fn is_negative_definite(m: &SymmetricMatrix, margin: f64) -> Result<bool, MatError> {
    debug_assert!(margin >= 0.0, "margin must be nonnegative");
    let (vals, _) = sym_eig(m)?;
    Ok(vals[0] < -margin)
}

/// True iff the smallest eigenvalue is strictly above `margin`.
pub fn is_positive_definite(m: &SymmetricMatrix, margin: f64) -> Result<bool, MatError> {
    debug_assert!(margin >= 0.0, "margin must be nonnegative");
    let (vals, _) = sym_eig(m)?;
    Ok(*vals.last().expect("nonempty spectrum") > margin)
}

/// Numerical rank via the eigenvalues of the Gram matrix `A^T A`.
///
/// Singular values below `tol` are treated as zero; the default tolerance is
/// sized for the Gram route's squared conditioning (a true zero singular
/// value resurfaces at roughly sqrt(machine epsilon) of the largest one).
pub fn rank_via_gram(a: &Matrix, tol: Option<f64>) -> Result<usize, MatError> {
    let gram = SymmetricMatrix::symmetrize(&a.transpose().matmul(a));
    let (vals, _) = sym_eig(&gram)?;
    let sigma_max = vals[0].max(0.0).sqrt();
    if sigma_max == 0.0 {
        return Ok(0);
    }
    let threshold = tol.unwrap_or_else(|| {
        let dim = a.rows().max(a.cols()) as f64;
        sigma_max * dim * 1e-10_f64.max(f64::EPSILON.sqrt())
    });
    Ok(vals
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .filter(|&s| s > threshold)
        .count())
}

/// Householder reduction of `v` (symmetric, full storage) to tridiagonal
/// form, accumulating the orthogonal transformation in `v`; the diagonal
/// lands in `d` and the subdiagonal in `e[1..]`.
fn tred2(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut h = 0.0;
        let mut scale = 0.0;
        if i > 1 {
            for item in d.iter().take(i) {
                scale += item.abs();
            }
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = if f > 0.0 { -h.sqrt() } else { h.sqrt() };
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let delta = f * e[k] + g * d[k];
                    let cur = v[(k, j)];
                    v[(k, j)] = cur - delta;
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the Householder transformations.
    for i in 0..(n - 1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    let cur = v[(k, j)];
                    v[(k, j)] = cur - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iteration with Wilkinson shifts on the tridiagonal form,
/// updating the accumulated transformation in `v`.
fn tql2(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<(), MatError> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0_f64;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_ITERATION_CAP {
                    return Err(MatError::EigenNonConvergence { dim: n });
                }

                // Wilkinson shift.
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // Implicit QL sweep.
                p = d[m];
                let mut c = 1.0_f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0_f64;
                let mut s2 = 0.0_f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
