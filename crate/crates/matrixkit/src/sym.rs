use std::ops::{Add, Mul, Neg, Sub};

use crate::dense::Matrix;
use crate::error::MatError;

/// Symmetric matrix stored as the packed lower triangle, so expansion to full
/// form equals its transpose exactly (stored symmetry, not numerical).
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    /// Row-packed lower triangle: entry (i, j) with i >= j at i(i+1)/2 + j.
    data: Vec<f64>,
}

impl SymmetricMatrix {
    fn packed_len(dim: usize) -> usize {
        dim * (dim + 1) / 2
    }

    #[inline]
    fn idx(i: usize, j: usize) -> usize {
        debug_assert!(j <= i);
        i * (i + 1) / 2 + j
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; Self::packed_len(dim)],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[Self::idx(i, i)] = 1.0;
        }
        m
    }

    /// `s * I`.
    pub fn scaled_identity(dim: usize, s: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[Self::idx(i, i)] = s;
        }
        m
    }

    /// Packs a square matrix, requiring symmetry within `tol` on the largest
    /// asymmetry; the lower triangle is kept verbatim.
    pub fn from_matrix(m: &Matrix, tol: f64) -> Result<Self, MatError> {
        if !m.is_square() {
            return Err(MatError::Shape(format!(
                "symmetric pack needs a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if worst > tol {
            return Err(MatError::Shape(format!(
                "matrix is not symmetric: max asymmetry {worst:.3e} exceeds {tol:.3e}"
            )));
        }
        let mut data = Vec::with_capacity(Self::packed_len(n));
        for i in 0..n {
            for j in 0..=i {
                data.push(m[(i, j)]);
            }
        }
        Ok(Self { dim: n, data })
    }

    /// Packs `(M + M^T) / 2` without a symmetry check.
    pub fn symmetrize(m: &Matrix) -> Self {
        assert!(m.is_square(), "symmetrize needs a square matrix");
        let n = m.rows();
        let mut data = Vec::with_capacity(Self::packed_len(n));
        for i in 0..n {
            for j in 0..=i {
                data.push(0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        Self { dim: n, data }
    }

    /// Builds from a closure over the lower triangle (i >= j).
    pub fn from_fn_lower(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(Self::packed_len(dim));
        for i in 0..dim {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= j {
            self.data[Self::idx(i, j)]
        } else {
            self.data[Self::idx(j, i)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if i >= j {
            self.data[Self::idx(i, j)] = v;
        } else {
            self.data[Self::idx(j, i)] = v;
        }
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        if i >= j {
            self.data[Self::idx(i, j)] += v;
        } else {
            self.data[Self::idx(j, i)] += v;
        }
    }

    /// Packed lower-triangle entries.
    pub fn packed(&self) -> &[f64] {
        &self.data
    }

    /// Expands to a full dense matrix; exactly equal to its transpose.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..=i {
                let v = self.data[Self::idx(i, j)];
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    /// Frobenius norm of the expanded matrix.
    pub fn norm_fro(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..=i {
                let v = self.data[Self::idx(i, j)];
                acc += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        acc.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |a, &v| a.max(v.abs()))
    }

    /// In-place `self += scale * other`.
    pub fn add_scaled(&mut self, other: &SymmetricMatrix, scale: f64) {
        assert_eq!(self.dim, other.dim, "add_scaled dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }
}

impl Add for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn add(self, rhs: &SymmetricMatrix) -> SymmetricMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        SymmetricMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn sub(self, rhs: &SymmetricMatrix) -> SymmetricMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        SymmetricMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn neg(self) -> SymmetricMatrix {
        SymmetricMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}

impl Mul<f64> for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn mul(self, s: f64) -> SymmetricMatrix {
        SymmetricMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }
}
