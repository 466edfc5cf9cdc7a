use crate::dense::Matrix;
use crate::error::MatError;
use crate::sym::SymmetricMatrix;

/// Reciprocal condition number below which a solve is refused outright.
const RCOND_FLOOR: f64 = 1e-12;

/// LU factorization with partial pivoting: `P A = L U` stored compactly.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Matrix,
    pivots: Vec<usize>,
    /// +1 or -1 depending on the parity of row swaps; 0 marks a breakdown.
    sign: f64,
}

/// Factors a square matrix with partial pivoting. A hard zero pivot yields a
/// factorization flagged singular (sign 0); callers decide how to react.
pub fn lu_factor(a: &Matrix) -> Result<LuFactors, MatError> {
    if !a.is_square() {
        return Err(MatError::Shape(format!(
            "LU needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut pivots: Vec<usize> = (0..n).collect();
    let mut sign = 1.0_f64;

    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].abs();
        for i in (k + 1)..n {
            let v = lu[(i, k)].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            sign = 0.0;
            continue;
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            pivots.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let m = lu[(i, k)] / pivot;
            lu[(i, k)] = m;
            if m != 0.0 {
                for j in (k + 1)..n {
                    let sub = m * lu[(k, j)];
                    let cur = lu[(i, j)];
                    lu[(i, j)] = cur - sub;
                }
            }
        }
    }
    Ok(LuFactors { lu, pivots, sign })
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// True when factorization hit an exactly zero pivot column.
    pub fn is_singular(&self) -> bool {
        self.sign == 0.0
    }

    /// Determinant from the pivot product.
    pub fn det(&self) -> f64 {
        if self.sign == 0.0 {
            return 0.0;
        }
        let mut det = self.sign;
        for i in 0..self.dim() {
            det *= self.lu[(i, i)];
        }
        det
    }

    /// Solves `A x = b` for one right-hand side (no refinement).
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut x: Vec<f64> = self.pivots.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A X = B` column by column (no refinement).
    pub fn solve_mat(&self, b: &Matrix) -> Matrix {
        let n = self.dim();
        assert_eq!(b.rows(), n, "right-hand side row mismatch");
        let mut x = Matrix::zeros(n, b.cols());
        let mut col = vec![0.0; n];
        for j in 0..b.cols() {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            let sol = self.solve_vec(&col);
            for i in 0..n {
                x[(i, j)] = sol[i];
            }
        }
        x
    }
}

/// 1-norm (maximum absolute column sum) used by the condition estimate.
fn norm_one(a: &Matrix) -> f64 {
    let mut best = 0.0_f64;
    for j in 0..a.cols() {
        let mut acc = 0.0;
        for i in 0..a.rows() {
            acc += a[(i, j)].abs();
        }
        best = best.max(acc);
    }
    best
}

/// Reciprocal 1-norm condition number computed directly from the explicit
/// inverse; adequate at the dimensions handled here.
pub fn rcond(a: &Matrix) -> Result<f64, MatError> {
    let f = lu_factor(a)?;
    if f.is_singular() {
        return Ok(0.0);
    }
    let inv = f.solve_mat(&Matrix::identity(a.rows()));
    if inv.data().iter().any(|v| !v.is_finite()) {
        return Ok(0.0);
    }
    let denom = norm_one(a) * norm_one(&inv);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / denom)
}

/// Solves `A X = B` with partial pivoting plus one step of iterative
/// refinement; refuses matrices whose reciprocal condition estimate is below
/// 1e-12, reporting the estimate.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Matrix, MatError> {
    if !a.is_square() {
        return Err(MatError::Shape(format!(
            "solve_linear needs a square system, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.rows() != b.rows() {
        return Err(MatError::Shape(format!(
            "right-hand side has {} rows, expected {}",
            b.rows(),
            a.rows()
        )));
    }
    let f = lu_factor(a)?;
    if f.is_singular() {
        return Err(MatError::Singular { rcond: 0.0 });
    }
    let rc = rcond(a)?;
    if rc < RCOND_FLOOR {
        return Err(MatError::Singular { rcond: rc });
    }
    let mut x = f.solve_mat(b);
    // One refinement step knocks the residual down to the contract level.
    let residual = b - &a.matmul(&x);
    let correction = f.solve_mat(&residual);
    x = &x + &correction;
    Ok(x)
}

/// Determinant via LU.
pub fn determinant(a: &Matrix) -> Result<f64, MatError> {
    Ok(lu_factor(a)?.det())
}

/// Explicit inverse via `solve_linear` against the identity.
pub fn inverse(a: &Matrix) -> Result<Matrix, MatError> {
    solve_linear(a, &Matrix::identity(a.rows()))
}

/// Cholesky factorization `M = L L^T` of a symmetric positive definite
/// matrix; reports the first nonpositive pivot otherwise.
pub fn cholesky(m: &SymmetricMatrix) -> Result<Matrix, MatError> {
    let n = m.dim();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = m.get(i, j);
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if acc <= 0.0 || !acc.is_finite() {
                    return Err(MatError::NotPositiveDefinite { pivot: i, value: acc });
                }
                l[(i, j)] = acc.sqrt();
            } else {
                l[(i, j)] = acc / l[(j, j)];
            }
        }
    }
    Ok(l)
}

/// Solves `L L^T x = b` given a Cholesky factor `L`.
pub fn solve_cholesky(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    assert_eq!(b.len(), n, "right-hand side length mismatch");
    let mut y = b.to_vec();
    for i in 0..n {
        let mut acc = y[i];
        for j in 0..i {
            acc -= l[(i, j)] * y[j];
        }
        y[i] = acc / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut acc = y[i];
        for j in (i + 1)..n {
            acc -= l[(j, i)] * y[j];
        }
        y[i] = acc / l[(i, i)];
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_solve_returns_rhs() {
        let b = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let x = solve_linear(&Matrix::identity(2), &b).unwrap();
        assert!(x.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn diagonal_solve() {
        let a = Matrix::from_diag(&[2.0, 4.0]);
        let b = Matrix::col_vec(&[2.0, 4.0]);
        let x = solve_linear(&a, &b).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((x[(1, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_is_singular() {
        let err = solve_linear(&Matrix::zeros(2, 2), &Matrix::identity(2)).unwrap_err();
        match err {
            MatError::Singular { rcond } => assert_eq!(rcond, 0.0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn near_singular_is_rejected_with_estimate() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0 + 1e-14]]).unwrap();
        match solve_linear(&a, &Matrix::identity(2)) {
            Err(MatError::Singular { rcond }) => assert!(rcond < 1e-12),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn residual_meets_contract_on_ill_conditioned_system() {
        // Hilbert-like matrix: poorly conditioned but above the floor at n=6.
        let n = 6;
        let a = Matrix::from_fn(n, n, |i, j| 1.0 / ((i + j + 1) as f64));
        let b = Matrix::from_fn(n, 1, |i, _| (i as f64) - 2.0);
        let x = solve_linear(&a, &b).unwrap();
        let resid = (&b - &a.matmul(&x)).norm_fro();
        let bound = 1e-8 * (a.norm_fro() * x.norm_fro() + b.norm_fro());
        assert!(resid <= bound, "residual {resid} exceeds {bound}");
    }

    #[test]
    fn determinant_of_known_matrices() {
        assert!((determinant(&Matrix::identity(3)).unwrap() - 1.0).abs() < 1e-15);
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((determinant(&a).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(determinant(&Matrix::zeros(2, 2)).unwrap(), 0.0);
    }

    #[test]
    fn cholesky_round_trip() {
        let m = SymmetricMatrix::from_matrix(
            &Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap(),
            0.0,
        )
        .unwrap();
        let l = cholesky(&m).unwrap();
        let rebuilt = l.matmul(&l.transpose());
        assert!(rebuilt.max_abs_diff(&m.to_matrix()) < 1e-14);
        let x = solve_cholesky(&l, &[1.0, 1.0]);
        let check = m.to_matrix().mul_vec(&x);
        assert!((check[0] - 1.0).abs() < 1e-12 && (check[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = SymmetricMatrix::from_matrix(
            &Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap(),
            0.0,
        )
        .unwrap();
        assert!(matches!(
            cholesky(&m),
            Err(MatError::NotPositiveDefinite { .. })
        ));
    }
}
