//! Seeded measurement noise and the error metrics used by the experiments.
//!
//! Gaussian samples come from `ChaCha8Rng::seed_from_u64(seed)` mapped
//! through `rand_distr::StandardNormal`. Both are portable and
//! deterministic, so a `(NoiseSpec, signal)` pair always yields the same
//! bytes on every platform.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::RealSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// Independent N(0, δ²) per sample.
    #[default]
    Iid,
    /// Gaussian direction rescaled so the discrete L2 norm is exactly δ.
    NormCalibrated,
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iid" => Ok(NoiseMode::Iid),
            "norm-calibrated" | "norm_calibrated" => Ok(NoiseMode::NormCalibrated),
            other => Err(Error::validation(format!(
                "unknown noise mode '{other}' (expected iid or norm-calibrated)"
            ))),
        }
    }
}

impl std::fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NoiseMode::Iid => "iid",
            NoiseMode::NormCalibrated => "norm-calibrated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub delta: f64,
    pub seed: u64,
    pub mode: NoiseMode,
}

impl NoiseSpec {
    pub fn new(delta: f64, seed: u64, mode: NoiseMode) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::validation(format!(
                "noise level delta must be >= 0, got {delta}"
            )));
        }
        Ok(Self { delta, seed, mode })
    }

    /// The raw noise vector for a grid of `n` points with spacing `dx`.
    pub fn sample(&self, n: usize, dx: f64) -> Vec<f64> {
        if self.delta == 0.0 {
            return vec![0.0; n];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let scale = match self.mode {
            NoiseMode::Iid => self.delta,
            NoiseMode::NormCalibrated => {
                let norm = (dx * z.iter().map(|v| v * v).sum::<f64>()).sqrt();
                self.delta / norm
            }
        };
        z.into_iter().map(|v| v * scale).collect()
    }
}

pub fn add_noise(g: &RealSignal, spec: &NoiseSpec) -> RealSignal {
    if spec.delta == 0.0 {
        return g.clone();
    }
    let eps = spec.sample(g.len(), g.grid().spacing());
    let values = g.values().iter().zip(eps).map(|(a, e)| a + e).collect();
    RealSignal::new(*g.grid(), values).expect("finite signal plus finite noise")
}

/// `√(Δx Σ s_j²)`.
pub fn discrete_l2(s: &RealSignal) -> f64 {
    (s.grid().spacing() * s.values().iter().map(|v| v * v).sum::<f64>()).sqrt()
}

pub fn relative_l2_error(estimate: &RealSignal, truth: &RealSignal) -> Result<f64> {
    let norm = discrete_l2(truth);
    if norm == 0.0 {
        return Err(Error::validation(
            "relative error against a zero-norm truth",
        ));
    }
    Ok(discrete_l2(&estimate.sub(truth)?) / norm)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::Grid;

    fn cosine() -> RealSignal {
        RealSignal::from_fn(Grid::standard(), f64::cos).unwrap()
    }

    #[test]
    fn zero_noise_is_identity() {
        let g = cosine();
        let spec = NoiseSpec::new(0.0, 9, NoiseMode::Iid).unwrap();
        assert_eq!(add_noise(&g, &spec), g);
        let spec = NoiseSpec::new(0.0, 9, NoiseMode::NormCalibrated).unwrap();
        assert_eq!(add_noise(&g, &spec), g);
    }

    #[test]
    fn calibrated_norm_is_exact() {
        let g = cosine();
        for seed in 0..10 {
            let spec = NoiseSpec::new(0.05, seed, NoiseMode::NormCalibrated).unwrap();
            let diff = add_noise(&g, &spec).sub(&g).unwrap();
            assert!((discrete_l2(&diff) - 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        let g = cosine();
        let spec = NoiseSpec::new(0.1, 1234, NoiseMode::Iid).unwrap();
        assert_eq!(add_noise(&g, &spec), add_noise(&g, &spec));
        let other = NoiseSpec { seed: 1235, ..spec };
        assert_ne!(add_noise(&g, &spec), add_noise(&g, &other));
    }

    #[test]
    fn negative_delta_rejected() {
        assert!(NoiseSpec::new(-0.1, 0, NoiseMode::Iid).is_err());
        assert!("bogus".parse::<NoiseMode>().is_err());
        assert_eq!(
            "norm-calibrated".parse::<NoiseMode>().unwrap(),
            NoiseMode::NormCalibrated
        );
    }

    #[test]
    fn l2_values() {
        let g = Grid::standard();
        assert_eq!(discrete_l2(&RealSignal::zeros(g)), 0.0);
        let ones = RealSignal::from_fn(g, |_| 1.0).unwrap();
        assert!((discrete_l2(&ones) - (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!((discrete_l2(&cosine()) - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn relative_error_values() {
        let t = cosine();
        assert_eq!(relative_l2_error(&t, &t).unwrap(), 0.0);
        assert!((relative_l2_error(&t.scaled(2.0), &t).unwrap() - 1.0).abs() < 1e-14);
        let c = 0.3;
        let shifted = RealSignal::from_fn(*t.grid(), |x| x.cos() + c).unwrap();
        let rel = relative_l2_error(&shifted, &t).unwrap();
        assert!((rel - c * 2f64.sqrt()).abs() < 1e-12);
        assert!(relative_l2_error(&t, &RealSignal::zeros(*t.grid())).is_err());
    }
}
