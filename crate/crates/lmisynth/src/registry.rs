//! Named decision-variable registry with scalar indexing.
//!
//! Every matrix variable of a semidefinite program is registered once with a
//! name and a shape. The registry assigns each variable a contiguous range of
//! scalar decision indices: symmetric matrices contribute n(n+1)/2 scalars
//! (packed lower triangle), general matrices contribute rows*cols, diagonal
//! matrices n, and scalars one. Constraints and solvers address the flat
//! scalar vector; `materialize` reconstitutes a matrix from it.

use crate::error::SynthError;
use matrixkit::Matrix;

/// Shape of a registered decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarShape {
    /// Symmetric n-by-n matrix, packed lower triangle.
    Symmetric(usize),
    /// General rows-by-cols matrix, row-major.
    General(usize, usize),
    /// Diagonal n-by-n matrix.
    Diagonal(usize),
    /// Single scalar.
    Scalar,
}

impl VarShape {
    /// Number of scalar decision variables this shape occupies.
    pub fn scalar_len(&self) -> usize {
        match *self {
            VarShape::Symmetric(n) => n * (n + 1) / 2,
            VarShape::General(r, c) => r * c,
            VarShape::Diagonal(n) => n,
            VarShape::Scalar => 1,
        }
    }

    /// Matrix dimensions (rows, cols) of the materialized variable.
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            VarShape::Symmetric(n) | VarShape::Diagonal(n) => (n, n),
            VarShape::General(r, c) => (r, c),
            VarShape::Scalar => (1, 1),
        }
    }
}

/// Opaque handle to a registered variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarHandle(pub(crate) usize);

/// Metadata stored per variable.
#[derive(Debug, Clone)]
pub struct VariableInfo {
    pub name: String,
    pub shape: VarShape,
    /// Whether the solver must keep this variable positive semidefinite.
    pub psd_required: bool,
    /// First scalar index owned by this variable.
    pub offset: usize,
}

/// Registry of all decision variables of one problem.
#[derive(Debug, Clone, Default)]
pub struct VariableRegistry {
    vars: Vec<VariableInfo>,
    total: usize,
}

impl VariableRegistry {
    /// Creates an empty registry.
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a variable; names must be unique.
    pub fn add(
        &mut self,
        name: impl Into<String>,
        shape: VarShape,
        psd_required: bool,
    ) -> Result<VarHandle, SynthError> {
        let name = name.into();
        if self.vars.iter().any(|v| v.name == name) {
            return Err(SynthError::DuplicateVariable(name));
        }
        if psd_required && !matches!(shape, VarShape::Symmetric(_) | VarShape::Diagonal(_) | VarShape::Scalar) {
            return Err(SynthError::InvalidParameter(format!(
                "variable `{name}`: positive semidefiniteness requires a symmetric shape"
            )));
        }
        let offset = self.total;
        self.total += shape.scalar_len();
        self.vars.push(VariableInfo { name, shape, psd_required, offset });
        Ok(VarHandle(self.vars.len() - 1))
    }

    /// Total number of scalar decision variables.
    pub fn scalar_count(&self) -> usize {
        self.total
    }

    /// Number of registered matrix variables.
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    /// Metadata for a handle.
    pub fn info(&self, h: VarHandle) -> &VariableInfo {
        &self.vars[h.0]
    }

    /// Looks a variable up by name.
    pub fn by_name(&self, name: &str) -> Option<VarHandle> {
        self.vars.iter().position(|v| v.name == name).map(VarHandle)
    }

    /// Iterates over all registered variables.
    pub fn iter(&self) -> impl Iterator<Item = (VarHandle, &VariableInfo)> {
        self.vars.iter().enumerate().map(|(i, v)| (VarHandle(i), v))
    }

    /// Scalar index range owned by a variable.
    pub fn scalar_range(&self, h: VarHandle) -> std::ops::Range<usize> {
        let info = self.info(h);
        info.offset..info.offset + info.shape.scalar_len()
    }

    /// Reconstitutes the matrix value of a variable from the flat vector.
    pub fn materialize(&self, h: VarHandle, x: &[f64]) -> Matrix {
        let info = self.info(h);
        assert!(
            x.len() >= self.total,
            "point has {} scalars, registry needs {}",
            x.len(),
            self.total
        );
        let vals = &x[self.scalar_range(h)];
        match info.shape {
            VarShape::Symmetric(n) => {
                let mut m = Matrix::zeros(n, n);
                let mut k = 0;
                for i in 0..n {
                    for j in 0..=i {
                        m[(i, j)] = vals[k];
                        m[(j, i)] = vals[k];
                        k += 1;
                    }
                }
                m
            }
            VarShape::General(r, c) => {
                Matrix::from_fn(r, c, |i, j| vals[i * c + j])
            }
            VarShape::Diagonal(n) => {
                let mut m = Matrix::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = vals[i];
                }
                m
            }
            VarShape::Scalar => Matrix::from_fn(1, 1, |_, _| vals[0]),
        }
    }

    /// Writes a matrix value of a variable into the flat vector.
    pub fn store(&self, h: VarHandle, value: &Matrix, x: &mut [f64]) {
        let info = self.info(h);
        let (r, c) = info.shape.dims();
        assert_eq!((value.rows(), value.cols()), (r, c), "store shape mismatch");
        let range = self.scalar_range(h);
        let vals = &mut x[range];
        match info.shape {
            VarShape::Symmetric(n) => {
                let mut k = 0;
                for i in 0..n {
                    for j in 0..=i {
                        vals[k] = 0.5 * (value[(i, j)] + value[(j, i)]);
                        k += 1;
                    }
                }
            }
            VarShape::General(rr, cc) => {
                for i in 0..rr {
                    for j in 0..cc {
                        vals[i * cc + j] = value[(i, j)];
                    }
                }
            }
            VarShape::Diagonal(n) => {
                for i in 0..n {
                    vals[i] = value[(i, i)];
                }
            }
            VarShape::Scalar => vals[0] = value[(0, 0)],
        }
    }

    /// Enumerates the basis matrices of a variable: for each scalar index, the
    /// matrix the variable takes when that scalar is one and the rest zero.
    /// Entries are (scalar_index, row, col, value) with at most two cells per
    /// scalar (the mirrored pair of a symmetric off-diagonal slot).
    pub fn basis(&self, h: VarHandle) -> Vec<(usize, Vec<(usize, usize, f64)>)> {
        let info = self.info(h);
        let base = info.offset;
        match info.shape {
            VarShape::Symmetric(n) => {
                let mut out = Vec::with_capacity(n * (n + 1) / 2);
                let mut k = 0;
                for i in 0..n {
                    for j in 0..=i {
                        let cells = if i == j {
                            vec![(i, j, 1.0)]
                        } else {
                            vec![(i, j, 1.0), (j, i, 1.0)]
                        };
                        out.push((base + k, cells));
                        k += 1;
                    }
                }
                out
            }
            VarShape::General(r, c) => (0..r * c)
                .map(|k| (base + k, vec![(k / c, k % c, 1.0)]))
                .collect(),
            VarShape::Diagonal(n) => (0..n).map(|k| (base + k, vec![(k, k, 1.0)])).collect(),
            VarShape::Scalar => vec![(base, vec![(0, 0, 1.0)])],
        }
    }
}
