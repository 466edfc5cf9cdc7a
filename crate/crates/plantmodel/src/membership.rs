use crate::error::PlantError;
use matrixkit::Matrix;

/// Maps the premise-variable vector to raw (unnormalized) rule activations.
#[derive(Debug, Clone)]
pub enum MembershipEvaluator {
    /// Two-rule sector split of x1^2 over [-x1_max, x1_max]: the first rule
    /// activates as x1^2 / x1_max^2, the second as its complement.
    SectorX1Squared { x1_max: f64 },
    /// Piecewise-linear table over the first premise variable. `values[k]`
    /// holds one activation per rule at `breakpoints[k]`; inputs outside the
    /// table clamp to the nearest end.
    Table {
        breakpoints: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

impl MembershipEvaluator {
    pub fn rule_count(&self) -> usize {
        match self {
            Self::SectorX1Squared { .. } => 2,
            Self::Table { values, .. } => values.first().map_or(0, Vec::len),
        }
    }

    /// Raw activations for the given premise vector; nonnegative by
    /// construction.
    pub fn evaluate(&self, premise: &[f64]) -> Vec<f64> {
        match self {
            Self::SectorX1Squared { x1_max } => {
                let x1 = premise.first().copied().unwrap_or(0.0);
                let clamped = x1.clamp(-*x1_max, *x1_max);
                let a1 = (clamped * clamped) / (x1_max * x1_max);
                vec![a1, 1.0 - a1]
            }
            Self::Table {
                breakpoints,
                values,
            } => {
                let x = premise.first().copied().unwrap_or(0.0);
                if x <= breakpoints[0] {
                    return values[0].clone();
                }
                if x >= *breakpoints.last().unwrap() {
                    return values.last().unwrap().clone();
                }
                let k = breakpoints.partition_point(|&b| b <= x) - 1;
                let span = breakpoints[k + 1] - breakpoints[k];
                let w = (x - breakpoints[k]) / span;
                values[k]
                    .iter()
                    .zip(&values[k + 1])
                    .map(|(lo, hi)| lo + w * (hi - lo))
                    .collect()
            }
        }
    }
}

/// Rule activations plus the per-rule bounds on how fast the normalized
/// memberships may vary along trajectories.
#[derive(Debug, Clone)]
pub struct MembershipModel {
    pub evaluator: MembershipEvaluator,
    /// Bound on the magnitude of each normalized membership's derivative.
    pub rho: Vec<f64>,
}

impl MembershipModel {
    pub fn rule_count(&self) -> usize {
        self.evaluator.rule_count()
    }

    pub fn validate(&self) -> Result<(), PlantError> {
        let r = self.rule_count();
        if r == 0 {
            return Err(PlantError::Dimension("membership has no rules".into()));
        }
        if self.rho.len() != r {
            return Err(PlantError::Dimension(format!(
                "{} derivative bounds for {} rules",
                self.rho.len(),
                r
            )));
        }
        if self.rho.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(PlantError::InvalidBound(
                "membership derivative bounds must be finite and nonnegative".into(),
            ));
        }
        if let MembershipEvaluator::Table {
            breakpoints,
            values,
        } = &self.evaluator
        {
            if breakpoints.len() < 2 || breakpoints.len() != values.len() {
                return Err(PlantError::Dimension(
                    "membership table needs one value row per breakpoint (at least two)".into(),
                ));
            }
            if !breakpoints.windows(2).all(|w| w[0] < w[1]) {
                return Err(PlantError::InvalidBound(
                    "membership table breakpoints must be strictly increasing".into(),
                ));
            }
            if values.iter().any(|row| row.len() != r) {
                return Err(PlantError::Dimension(
                    "membership table rows must share one rule count".into(),
                ));
            }
            if values.iter().flatten().any(|&v| v < 0.0 || !v.is_finite()) {
                return Err(PlantError::InvalidBound(
                    "membership table activations must be finite and nonnegative".into(),
                ));
            }
        }
        Ok(())
    }

    /// Normalized memberships at the given premise vector.
    pub fn memberships(&self, premise: &[f64]) -> Result<Vec<f64>, PlantError> {
        normalize_memberships(&self.evaluator.evaluate(premise))
    }
}

/// Scales nonnegative activations so they sum to one.
pub fn normalize_memberships(activations: &[f64]) -> Result<Vec<f64>, PlantError> {
    if activations.iter().any(|&a| a < 0.0 || !a.is_finite()) {
        return Err(PlantError::InvalidBound(
            "activations must be finite and nonnegative".into(),
        ));
    }
    let total: f64 = activations.iter().sum();
    if total <= 0.0 {
        return Err(PlantError::DegenerateMembership);
    }
    Ok(activations.iter().map(|a| a / total).collect())
}

/// Membership-weighted sum of per-rule matrices.
pub fn blend(lambda: &[f64], per_rule: &[&Matrix]) -> Result<Matrix, PlantError> {
    if lambda.len() != per_rule.len() {
        return Err(PlantError::Dimension(format!(
            "{} memberships for {} matrices",
            lambda.len(),
            per_rule.len()
        )));
    }
    if per_rule.is_empty() {
        return Err(PlantError::Dimension("nothing to blend".into()));
    }
    let rows = per_rule[0].rows();
    let cols = per_rule[0].cols();
    let mut out = Matrix::zeros(rows, cols);
    for (k, m) in per_rule.iter().enumerate() {
        if m.rows() != rows || m.cols() != cols {
            return Err(PlantError::Dimension(format!(
                "rule {k} matrix is {}x{}, expected {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
        out.add_block_scaled(0, 0, m, lambda[k]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_matches_direct_ratios() {
        let out = normalize_memberships(&[2.0, 6.0]).unwrap();
        assert_eq!(out, vec![0.25, 0.75]);
        let equal = normalize_memberships(&[0.7, 0.7, 0.7]).unwrap();
        for v in equal {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn all_zero_activations_are_degenerate() {
        assert!(matches!(
            normalize_memberships(&[0.0, 0.0]),
            Err(PlantError::DegenerateMembership)
        ));
    }

    #[test]
    fn sector_evaluator_saturates_at_the_band_edge() {
        let m = MembershipModel {
            evaluator: MembershipEvaluator::SectorX1Squared { x1_max: 3.0 },
            rho: vec![100.0, 100.0],
        };
        assert_eq!(m.memberships(&[3.0, 7.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(m.memberships(&[0.0]).unwrap(), vec![0.0, 1.0]);
        let mid = m.memberships(&[1.5]).unwrap();
        assert!((mid[0] - 0.25).abs() < 1e-15);
        assert!((mid[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn table_evaluator_interpolates_and_clamps() {
        let m = MembershipModel {
            evaluator: MembershipEvaluator::Table {
                breakpoints: vec![-1.0, 1.0],
                values: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            },
            rho: vec![1.0, 1.0],
        };
        m.validate().unwrap();
        assert_eq!(m.memberships(&[-5.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(m.memberships(&[5.0]).unwrap(), vec![0.0, 1.0]);
        let mid = m.memberships(&[0.0]).unwrap();
        assert!((mid[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn one_hot_blend_returns_the_selected_rule() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![-3.0, 5.0]]).unwrap();
        let out = blend(&[0.0, 1.0], &[&a, &b]).unwrap();
        assert_eq!(out.data(), b.data());
    }

    #[test]
    fn blend_averages_rule_matrices() {
        let a1 = Matrix::from_rows(&[vec![-2.1, 0.1], vec![1.0, -2.0]]).unwrap();
        let a2 = Matrix::from_rows(&[vec![-1.9, 0.0], vec![-0.2, -1.1]]).unwrap();
        let out = blend(&[0.5, 0.5], &[&a1, &a2]).unwrap();
        assert!((out[(0, 0)] + 2.0).abs() < 1e-15);
        let scaled = blend(
            &[1.0 / 3.0; 3],
            &[
                &Matrix::identity(2),
                &(&Matrix::identity(2) * 2.0),
                &(&Matrix::identity(2) * 3.0),
            ],
        )
        .unwrap();
        assert!(scaled.max_abs_diff(&(&Matrix::identity(2) * 2.0)) < 1e-15);
    }
}
