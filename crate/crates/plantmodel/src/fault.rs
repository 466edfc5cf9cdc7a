use crate::error::PlantError;
use matrixkit::Matrix;
use rand::Rng;

/// Per-channel multiplicative sensor fault band: each measured channel is
/// scaled by an unknown constant beta_g inside [beta_lower_g, beta_upper_g].
#[derive(Debug, Clone)]
pub struct SensorFaultModel {
    pub beta_lower: Vec<f64>,
    pub beta_upper: Vec<f64>,
}

impl SensorFaultModel {
    /// Fault-free model: every channel fixed at gain one.
    pub fn healthy(channels: usize) -> Self {
        Self {
            beta_lower: vec![1.0; channels],
            beta_upper: vec![1.0; channels],
        }
    }

    /// Every channel pinned to one constant gain.
    pub fn constant(channels: usize, beta: f64) -> Self {
        Self {
            beta_lower: vec![beta; channels],
            beta_upper: vec![beta; channels],
        }
    }

    pub fn channels(&self) -> usize {
        self.beta_lower.len()
    }

    pub fn validate(&self) -> Result<(), PlantError> {
        if self.beta_lower.is_empty() || self.beta_lower.len() != self.beta_upper.len() {
            return Err(PlantError::Dimension(
                "fault model needs matching nonempty bound lists".into(),
            ));
        }
        for (g, (&lo, &hi)) in self.beta_lower.iter().zip(&self.beta_upper).enumerate() {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(PlantError::InvalidBound(format!(
                    "fault channel {g} bounds [{lo}, {hi}] must satisfy 0 <= lo <= hi <= 1"
                )));
            }
        }
        Ok(())
    }

    /// Midpoint gains as a diagonal matrix.
    pub fn midpoint(&self) -> Matrix {
        let d: Vec<f64> = self
            .beta_lower
            .iter()
            .zip(&self.beta_upper)
            .map(|(lo, hi)| (lo + hi) / 2.0)
            .collect();
        Matrix::from_diag(&d)
    }

    /// Half-range of each channel's band as a diagonal matrix.
    pub fn half_range(&self) -> Matrix {
        let d: Vec<f64> = self
            .beta_lower
            .iter()
            .zip(&self.beta_upper)
            .map(|(lo, hi)| (hi - lo) / 2.0)
            .collect();
        Matrix::from_diag(&d)
    }
}

/// Splits the fault band into its diagonal midpoint and half-range parts.
pub fn fault_decompose(model: &SensorFaultModel) -> (Matrix, Matrix) {
    (model.midpoint(), model.half_range())
}

/// Draws one diagonal fault realization uniformly inside the band.
pub fn sample_fault<R: Rng>(model: &SensorFaultModel, rng: &mut R) -> Matrix {
    let d: Vec<f64> = model
        .beta_lower
        .iter()
        .zip(&model.beta_upper)
        .map(|(&lo, &hi)| if lo == hi { lo } else { rng.gen_range(lo..=hi) })
        .collect();
    Matrix::from_diag(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn decomposition_of_reference_bands() {
        let (mid, half) = fault_decompose(&SensorFaultModel::healthy(2));
        assert!(mid.max_abs_diff(&Matrix::identity(2)) < 1e-15);
        assert_eq!(half.max_abs(), 0.0);

        let (mid, half) = fault_decompose(&SensorFaultModel {
            beta_lower: vec![0.4],
            beta_upper: vec![0.6],
        });
        assert!((mid[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((half[(0, 0)] - 0.1).abs() < 1e-15);

        let (mid, half) = fault_decompose(&SensorFaultModel::constant(3, 0.0));
        assert_eq!(mid.max_abs(), 0.0);
        assert_eq!(half.max_abs(), 0.0);
    }

    #[test]
    fn degenerate_band_is_deterministic() {
        let model = SensorFaultModel::constant(2, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let beta = sample_fault(&model, &mut rng);
        assert_eq!(beta[(0, 0)], 0.5);
        assert_eq!(beta[(1, 1)], 0.5);
    }

    #[test]
    fn draws_stay_in_band_and_average_to_the_midpoint() {
        let model = SensorFaultModel {
            beta_lower: vec![0.0],
            beta_upper: vec![1.0],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 10_000;
        let mut mean = 0.0;
        for _ in 0..n {
            let b = sample_fault(&model, &mut rng)[(0, 0)];
            assert!((0.0..=1.0).contains(&b));
            mean += b;
        }
        mean /= n as f64;
        let band = 3.0 / (12.0 * n as f64).sqrt();
        assert!(
            (mean - 0.5).abs() <= band,
            "mean {mean} outside 0.5 +- {band}"
        );
    }

    #[test]
    fn invalid_bands_are_rejected() {
        assert!(SensorFaultModel {
            beta_lower: vec![0.7],
            beta_upper: vec![0.3],
        }
        .validate()
        .is_err());
        assert!(SensorFaultModel {
            beta_lower: vec![-0.1],
            beta_upper: vec![0.5],
        }
        .validate()
        .is_err());
    }
}
