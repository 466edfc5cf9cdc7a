use crate::error::PlantError;
use matrixkit::{inverse, is_positive_definite, mgs_qr, rcond, sym_eig, Matrix, SymmetricMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

const RESAMPLE_CAP: usize = 50;
const FEEDBACK_RCOND_FLOOR: f64 = 1e-8;

/// Linear-fractional uncertainty data: the perturbation enters every plant
/// channel through M, is shaped per channel by N1..N8, and feeds back on
/// itself through L.
#[derive(Debug, Clone)]
pub struct UncertaintyStructure {
    pub m: Matrix,
    /// Channel shaping rows; the first four act on the plant, the rest on the
    /// filter-side signals.
    pub n: Vec<Matrix>,
    pub l: Matrix,
    pub enabled: bool,
}

impl UncertaintyStructure {
    /// Placeholder structure for nominal plants.
    pub fn disabled(state_dim: usize) -> Self {
        Self {
            m: Matrix::zeros(state_dim, 1),
            n: (0..8).map(|_| Matrix::zeros(1, state_dim)).collect(),
            l: Matrix::zeros(1, 1),
            enabled: false,
        }
    }

    /// Width of the uncertainty channel (column count of M).
    pub fn width(&self) -> usize {
        self.m.cols()
    }

    pub fn validate(&self, state_dim: usize) -> Result<(), PlantError> {
        let w = self.width();
        if self.m.rows() != state_dim {
            return Err(PlantError::Dimension(format!(
                "uncertainty M is {}x{}, expected {state_dim} rows",
                self.m.rows(),
                self.m.cols()
            )));
        }
        if self.n.len() != 8 {
            return Err(PlantError::Dimension(format!(
                "expected 8 shaping matrices, got {}",
                self.n.len()
            )));
        }
        for (k, nk) in self.n.iter().enumerate() {
            if nk.rows() != w || nk.cols() != state_dim {
                return Err(PlantError::Dimension(format!(
                    "shaping matrix N{} is {}x{}, expected {w}x{state_dim}",
                    k + 1,
                    nk.rows(),
                    nk.cols()
                )));
            }
        }
        if self.l.rows() != w || self.l.cols() != w {
            return Err(PlantError::Dimension(format!(
                "feedback block L is {}x{}, expected {w}x{w}",
                self.l.rows(),
                self.l.cols()
            )));
        }
        if self.enabled {
            let gram = SymmetricMatrix::symmetrize(
                &(&Matrix::identity(w) - &self.l.matmul(&self.l.transpose())),
            );
            if !is_positive_definite(&gram, 0.0)? {
                return Err(PlantError::InvalidBound(
                    "I - L L^T must be positive definite".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Largest singular value, used to confirm sampled contractions.
pub fn spectral_norm(g: &Matrix) -> Result<f64, PlantError> {
    let gram = SymmetricMatrix::symmetrize(&g.transpose().matmul(g));
    let (vals, _) = sym_eig(&gram)?;
    Ok(vals[0].max(0.0).sqrt())
}

/// Draws a matrix with all singular values in [0, 1]: a random orthogonal
/// factor times a random diagonal.
pub fn sample_contraction<R: Rng>(dim: usize, rng: &mut R) -> Result<Matrix, PlantError> {
    loop {
        let gauss = Matrix::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
        match mgs_qr(&gauss) {
            Ok((q, _)) => {
                let d: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..=1.0)).collect();
                return Ok(q.matmul(&Matrix::from_diag(&d)));
            }
            // A rank-deficient Gaussian draw has probability zero; retry.
            Err(_) => continue,
        }
    }
}

/// Resolves the fractional feedback for a fixed contraction G, producing the
/// effective perturbation (I - G L)^{-1} G.
pub fn resolve_uncertainty(u: &UncertaintyStructure, g: &Matrix) -> Result<Matrix, PlantError> {
    let w = u.width();
    let feedback = &Matrix::identity(w) - &g.matmul(&u.l);
    if rcond(&feedback)? < FEEDBACK_RCOND_FLOOR {
        return Err(PlantError::UncertaintyResample { attempts: 1 });
    }
    Ok(inverse(&feedback)?.matmul(g))
}

/// Samples an admissible perturbation, retrying draws whose feedback loop is
/// too close to singular.
pub fn sample_uncertainty<R: Rng>(
    u: &UncertaintyStructure,
    rng: &mut R,
) -> Result<Matrix, PlantError> {
    for _ in 0..RESAMPLE_CAP {
        let g = sample_contraction(u.width(), rng)?;
        let feedback = &Matrix::identity(u.width()) - &g.matmul(&u.l);
        if rcond(&feedback)? < FEEDBACK_RCOND_FLOOR {
            continue;
        }
        return Ok(inverse(&feedback)?.matmul(&g));
    }
    Err(PlantError::UncertaintyResample {
        attempts: RESAMPLE_CAP,
    })
}
