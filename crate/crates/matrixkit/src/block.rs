use crate::dense::Matrix;
use crate::error::MatError;

/// Partition of a matrix into a grid of blocks with per-row and per-column
/// sizes.
#[derive(Debug, Clone)]
pub struct BlockLayout {
    row_sizes: Vec<usize>,
    col_sizes: Vec<usize>,
    row_offsets: Vec<usize>,
    col_offsets: Vec<usize>,
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut off = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    off.push(0);
    for &s in sizes {
        acc += s;
        off.push(acc);
    }
    off
}

impl BlockLayout {
    pub fn new(row_sizes: &[usize], col_sizes: &[usize]) -> Self {
        Self {
            row_offsets: offsets(row_sizes),
            col_offsets: offsets(col_sizes),
            row_sizes: row_sizes.to_vec(),
            col_sizes: col_sizes.to_vec(),
        }
    }

    /// Square layout sharing one size list for rows and columns.
    pub fn square(sizes: &[usize]) -> Self {
        Self::new(sizes, sizes)
    }

    pub fn block_rows(&self) -> usize {
        self.row_sizes.len()
    }

    pub fn block_cols(&self) -> usize {
        self.col_sizes.len()
    }

    pub fn rows(&self) -> usize {
        *self.row_offsets.last().unwrap()
    }

    pub fn cols(&self) -> usize {
        *self.col_offsets.last().unwrap()
    }

    pub fn row_size(&self, i: usize) -> usize {
        self.row_sizes[i]
    }

    pub fn col_size(&self, j: usize) -> usize {
        self.col_sizes[j]
    }

    pub fn row_offset(&self, i: usize) -> usize {
        self.row_offsets[i]
    }

    pub fn col_offset(&self, j: usize) -> usize {
        self.col_offsets[j]
    }

    fn check_slot(&self, r: usize, c: usize, m: &Matrix) -> Result<(), MatError> {
        if r >= self.block_rows() || c >= self.block_cols() {
            return Err(MatError::Shape(format!(
                "block slot ({r},{c}) outside {}x{} grid",
                self.block_rows(),
                self.block_cols()
            )));
        }
        if m.rows() != self.row_sizes[r] || m.cols() != self.col_sizes[c] {
            return Err(MatError::Shape(format!(
                "block at slot ({r},{c}) is {}x{}, layout expects {}x{}",
                m.rows(),
                m.cols(),
                self.row_sizes[r],
                self.col_sizes[c]
            )));
        }
        Ok(())
    }
}

/// Assembles a matrix from listed blocks; unlisted slots are zero. Each slot
/// may be listed once and every block must match the layout exactly.
pub fn assemble_blocks(
    layout: &BlockLayout,
    blocks: &[(usize, usize, &Matrix)],
) -> Result<Matrix, MatError> {
    let mut out = Matrix::zeros(layout.rows(), layout.cols());
    let mut seen = vec![false; layout.block_rows() * layout.block_cols()];
    for &(r, c, m) in blocks {
        layout.check_slot(r, c, m)?;
        let key = r * layout.block_cols() + c;
        if seen[key] {
            return Err(MatError::Shape(format!("block slot ({r},{c}) listed twice")));
        }
        seen[key] = true;
        out.set_block(layout.row_offset(r), layout.col_offset(c), m);
    }
    Ok(out)
}

/// Assembles a symmetric matrix from blocks on or above the block diagonal.
/// Each off-diagonal block (r,c) with r < c is mirrored bit-exactly into
/// (c,r) transposed; diagonal blocks must already equal their transpose.
pub fn assemble_symmetric(
    layout: &BlockLayout,
    blocks: &[(usize, usize, &Matrix)],
) -> Result<Matrix, MatError> {
    if layout.row_sizes != layout.col_sizes {
        return Err(MatError::Shape(
            "symmetric assembly needs a square block layout".to_string(),
        ));
    }
    let mut listed: Vec<(usize, usize, &Matrix)> = Vec::with_capacity(2 * blocks.len());
    for &(r, c, m) in blocks {
        if r > c {
            return Err(MatError::Shape(format!(
                "block slot ({r},{c}) lies below the diagonal; list its mirror instead"
            )));
        }
        if r == c {
            layout.check_slot(r, c, m)?;
            for i in 0..m.rows() {
                for j in 0..i {
                    if m[(i, j)] != m[(j, i)] {
                        return Err(MatError::Shape(format!(
                            "diagonal block at slot ({r},{r}) is not symmetric"
                        )));
                    }
                }
            }
        }
        listed.push((r, c, m));
    }
    let mut mirrored: Vec<Matrix> = Vec::new();
    for &(r, c, m) in blocks {
        if r < c {
            mirrored.push(m.transpose());
        }
    }
    let mut idx = 0;
    let mut all: Vec<(usize, usize, &Matrix)> = listed;
    for &(r, c, _) in blocks {
        if r < c {
            all.push((c, r, &mirrored[idx]));
            idx += 1;
        }
    }
    assemble_blocks(layout, &all)
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let s = a[(i, j)];
            if s == 0.0 {
                continue;
            }
            for p in 0..b.rows() {
                for q in 0..b.cols() {
                    out[(i * b.rows() + p, j * b.cols() + q)] = s * b[(p, q)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_blocks_are_zero() {
        let layout = BlockLayout::new(&[2, 1], &[1, 2]);
        let top = Matrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        let out = assemble_blocks(&layout, &[(0, 0, &top)]).unwrap();
        assert_eq!(out.rows(), 3);
        assert_eq!(out.cols(), 3);
        assert_eq!(out[(0, 0)], 1.0);
        assert_eq!(out[(1, 0)], 2.0);
        for j in 1..3 {
            for i in 0..3 {
                assert_eq!(out[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn dimension_mismatch_names_the_slot() {
        let layout = BlockLayout::square(&[2, 2]);
        let wrong = Matrix::zeros(1, 2);
        let err = assemble_blocks(&layout, &[(1, 0, &wrong)]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(1,0)"), "message should name the slot: {msg}");
    }

    #[test]
    fn duplicate_slot_is_rejected() {
        let layout = BlockLayout::square(&[1]);
        let a = Matrix::identity(1);
        assert!(assemble_blocks(&layout, &[(0, 0, &a), (0, 0, &a)]).is_err());
    }

    #[test]
    fn symmetric_assembly_mirrors_exactly() {
        let layout = BlockLayout::square(&[2, 2]);
        let diag = Matrix::from_rows(&[vec![1.0, 0.25], vec![0.25, 2.0]]).unwrap();
        let off = Matrix::from_rows(&[vec![0.1, 0.2], vec![0.3, 0.4]]).unwrap();
        let out = assemble_symmetric(&layout, &[(0, 0, &diag), (0, 1, &off)]).unwrap();
        let t = out.transpose();
        assert_eq!(out.data(), t.data(), "mirror must be bit-exact");
        assert_eq!(out[(2, 0)], 0.1);
        assert_eq!(out[(2, 1)], 0.3);
    }

    #[test]
    fn symmetric_assembly_rejects_asymmetric_diagonal() {
        let layout = BlockLayout::square(&[2]);
        let bad = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]).unwrap();
        assert!(assemble_symmetric(&layout, &[(0, 0, &bad)]).is_err());
    }

    #[test]
    fn kron_matches_definition() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![0.0, 5.0], vec![6.0, 7.0]]).unwrap();
        let k = kron(&a, &b);
        assert_eq!(k.rows(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let expect = a[(i / 2, j / 2)] * b[(i % 2, j % 2)];
                assert_eq!(k[(i, j)], expect);
            }
        }
    }
}
