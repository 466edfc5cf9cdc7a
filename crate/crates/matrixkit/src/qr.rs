use crate::dense::Matrix;
use crate::error::MatError;

/// Thin QR factorization by modified Gram-Schmidt with one re-orthogonalization
/// pass: `a = q r` with orthonormal columns in `q` and upper-triangular `r`.
/// Requires full column rank.
pub fn mgs_qr(a: &Matrix) -> Result<(Matrix, Matrix), MatError> {
    let m = a.rows();
    let n = a.cols();
    if m < n {
        return Err(MatError::Shape(format!(
            "thin QR needs rows >= cols, got {m}x{n}"
        )));
    }
    let mut q = a.clone();
    let mut r = Matrix::zeros(n, n);
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                let mut dot = 0.0;
                for k in 0..m {
                    dot += q[(k, i)] * q[(k, j)];
                }
                r[(i, j)] += dot;
                for k in 0..m {
                    let delta = dot * q[(k, i)];
                    q[(k, j)] -= delta;
                }
            }
        }
        let mut norm = 0.0;
        for k in 0..m {
            norm += q[(k, j)] * q[(k, j)];
        }
        let norm = norm.sqrt();
        if norm <= 1e-300 {
            return Err(MatError::Singular { rcond: 0.0 });
        }
        r[(j, j)] = norm;
        for k in 0..m {
            q[(k, j)] /= norm;
        }
    }
    Ok((q, r))
}
