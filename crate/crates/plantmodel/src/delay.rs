use crate::error::PlantError;
use rand::Rng;

/// Deterministic delay trajectory from a small parametric family.
#[derive(Debug, Clone)]
pub enum DelayGenerator {
    /// center + amplitude * sin(omega * t + phase)
    Sinusoid {
        center: f64,
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    Constant { value: f64 },
}

impl DelayGenerator {
    /// Sinusoid filling the band [lo, hi] with slope at most `sigma`.
    pub fn sinusoid_in_band(lo: f64, hi: f64, sigma: f64) -> Self {
        let amplitude = (hi - lo) / 2.0;
        let omega = if amplitude > 0.0 {
            (0.999 * sigma / amplitude).min(std::f64::consts::FRAC_PI_2)
        } else {
            0.0
        };
        Self::Sinusoid {
            center: (lo + hi) / 2.0,
            amplitude,
            omega,
            phase: 0.0,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Self::Sinusoid {
                center,
                amplitude,
                omega,
                phase,
            } => center + amplitude * (omega * t + phase).sin(),
            Self::Constant { value } => *value,
        }
    }

    pub fn min_value(&self) -> f64 {
        match self {
            Self::Sinusoid {
                center, amplitude, ..
            } => center - amplitude.abs(),
            Self::Constant { value } => *value,
        }
    }

    pub fn max_value(&self) -> f64 {
        match self {
            Self::Sinusoid {
                center, amplitude, ..
            } => center + amplitude.abs(),
            Self::Constant { value } => *value,
        }
    }

    pub fn rate_bound(&self) -> f64 {
        match self {
            Self::Sinusoid {
                amplitude, omega, ..
            } => (amplitude * omega).abs(),
            Self::Constant { .. } => 0.0,
        }
    }
}

/// Two-interval random delay description: a short delay d_1(t) in [d_m, d_0]
/// active with probability delta0, a long delay d_2(t) in (d_0, d_M]
/// otherwise, and an independent filter delay tau(t) in [0, tau_bar].
#[derive(Debug, Clone)]
pub struct DelaySpec {
    pub d_m: f64,
    pub d_0: f64,
    pub d_big: f64,
    /// Derivative bounds for d_1, d_2, tau in order.
    pub sigma: [f64; 3],
    pub tau_bar: f64,
    /// Probability that the short-delay branch is active.
    pub delta0: f64,
    pub gen_d1: DelayGenerator,
    pub gen_d2: DelayGenerator,
    pub gen_tau: DelayGenerator,
    /// Length of the intervals over which the Bernoulli switch is held.
    pub delta_resample: f64,
}

impl DelaySpec {
    pub fn validate(&self) -> Result<(), PlantError> {
        if !(self.d_m >= 0.0 && self.d_m <= self.d_0 && self.d_0 < self.d_big) {
            return Err(PlantError::InvalidBound(format!(
                "delay bounds must satisfy 0 <= d_m <= d_0 < d_M, got ({}, {}, {})",
                self.d_m, self.d_0, self.d_big
            )));
        }
        if self.tau_bar < 0.0 {
            return Err(PlantError::InvalidBound("tau_bar must be nonnegative".into()));
        }
        if self.sigma.iter().any(|&s| s < 0.0 || !s.is_finite()) {
            return Err(PlantError::InvalidBound(
                "delay derivative bounds must be finite and nonnegative".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.delta0) {
            return Err(PlantError::InvalidBound(format!(
                "delta0 must lie in [0,1], got {}",
                self.delta0
            )));
        }
        if self.delta_resample <= 0.0 {
            return Err(PlantError::InvalidBound(
                "delta resample interval must be positive".into(),
            ));
        }
        let checks = [
            ("d_1", &self.gen_d1, self.d_m, self.d_0, self.sigma[0]),
            ("d_2", &self.gen_d2, self.d_0, self.d_big, self.sigma[1]),
            ("tau", &self.gen_tau, 0.0, self.tau_bar, self.sigma[2]),
        ];
        for (name, gen, lo, hi, sigma) in checks {
            if gen.min_value() < lo - 1e-12 || gen.max_value() > hi + 1e-12 {
                return Err(PlantError::InvalidBound(format!(
                    "{name} generator range [{}, {}] leaves its band [{lo}, {hi}]",
                    gen.min_value(),
                    gen.max_value()
                )));
            }
            if gen.rate_bound() > sigma + 1e-6 {
                return Err(PlantError::InvalidBound(format!(
                    "{name} generator rate {} exceeds bound {sigma}",
                    gen.rate_bound()
                )));
            }
        }
        // The long-delay branch must stay strictly above d_0.
        if self.gen_d2.min_value() <= self.d_0 {
            return Err(PlantError::InvalidBound(format!(
                "d_2 generator minimum {} does not exceed d_0 = {}",
                self.gen_d2.min_value(),
                self.d_0
            )));
        }
        Ok(())
    }

    pub fn d1_at(&self, t: f64) -> f64 {
        self.gen_d1.value(t)
    }

    pub fn d2_at(&self, t: f64) -> f64 {
        self.gen_d2.value(t)
    }

    pub fn tau_at(&self, t: f64) -> f64 {
        self.gen_tau.value(t)
    }

    /// Largest delay any channel can reach; the history buffer must cover it.
    pub fn max_lag(&self) -> f64 {
        self.d_big.max(self.tau_bar)
    }
}

/// One realization of the Bernoulli switching process, held constant over
/// consecutive resampling intervals.
#[derive(Debug, Clone)]
pub struct DeltaProcess {
    draws: Vec<u8>,
    interval: f64,
}

impl DeltaProcess {
    pub fn sample<R: Rng>(spec: &DelaySpec, horizon: f64, rng: &mut R) -> Self {
        let count = (horizon / spec.delta_resample).ceil().max(1.0) as usize;
        let draws = (0..count)
            .map(|_| u8::from(rng.gen_bool(spec.delta0)))
            .collect();
        Self {
            draws,
            interval: spec.delta_resample,
        }
    }

    pub fn value(&self, t: f64) -> u8 {
        let idx = (t / self.interval).floor().max(0.0) as usize;
        self.draws[idx.min(self.draws.len() - 1)]
    }

    pub fn draws(&self) -> &[u8] {
        &self.draws
    }
}

/// Delay trajectories evaluated on a uniform time grid.
#[derive(Debug, Clone)]
pub struct DelayPath {
    pub t: Vec<f64>,
    pub delta: Vec<u8>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub tau: Vec<f64>,
    /// delta * d1 + (1 - delta) * d2 at each grid point.
    pub d_eff: Vec<f64>,
    /// Raw Bernoulli draws, one per resampling interval.
    pub interval_draws: Vec<u8>,
}

/// Samples a switching realization and evaluates all delay channels on the
/// grid t_k = k * step covering [0, horizon].
pub fn sample_delay_path<R: Rng>(
    spec: &DelaySpec,
    horizon: f64,
    step: f64,
    rng: &mut R,
) -> Result<DelayPath, PlantError> {
    if step <= 0.0 || horizon < step {
        return Err(PlantError::InvalidBound(
            "delay path needs step > 0 and horizon >= step".into(),
        ));
    }
    spec.validate()?;
    let process = DeltaProcess::sample(spec, horizon, rng);
    let steps = (horizon / step).round() as usize;
    let mut path = DelayPath {
        t: Vec::with_capacity(steps + 1),
        delta: Vec::with_capacity(steps + 1),
        d1: Vec::with_capacity(steps + 1),
        d2: Vec::with_capacity(steps + 1),
        tau: Vec::with_capacity(steps + 1),
        d_eff: Vec::with_capacity(steps + 1),
        interval_draws: process.draws().to_vec(),
    };
    for k in 0..=steps {
        let t = k as f64 * step;
        let delta = process.value(t);
        let d1 = spec.d1_at(t);
        let d2 = spec.d2_at(t);
        path.t.push(t);
        path.delta.push(delta);
        path.d1.push(d1);
        path.d2.push(d2);
        path.tau.push(spec.tau_at(t));
        path.d_eff
            .push(if delta == 1 { d1 } else { d2 });
    }
    Ok(path)
}
