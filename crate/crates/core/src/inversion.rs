//! Forward solver, the two inverters, the a-priori parameter rule, the
//! `H^p` norm and the theoretical error bound.

use crate::error::{Error, Result};
use crate::spectral::{
    apply_multiplier, forward_multiplier, from_spectrum, inverse_multiplier, regularized_unchecked,
    to_spectrum, RealSignal,
};

/// Largest discrete mean accepted by [`solve_forward`] without demeaning.
pub const MEAN_TOLERANCE: f64 = 1e-10;

/// Regularization setting: noise level δ, smoothness bound E, smoothness
/// order p and parameter μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegParams {
    pub delta: f64,
    pub e: f64,
    pub p: f64,
    pub mu: f64,
}

impl RegParams {
    pub fn new(delta: f64, e: f64, p: f64, mu: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::validation(format!(
                "delta must be >= 0, got {delta}"
            )));
        }
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::validation(format!("E must be > 0, got {e}")));
        }
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::validation(format!("p must be >= 0, got {p}")));
        }
        crate::spectral::regularized_multiplier(0.0, mu)?;
        Ok(Self { delta, e, p, mu })
    }

    /// Parameters with μ chosen by [`select_mu`].
    pub fn from_rule(delta: f64, e: f64, p: f64) -> Result<Self> {
        let choice = select_mu(delta, e, p)?;
        Self::new(delta, e, p, choice.mu)
    }

    /// `δ/E ≤ μ² ≤ 1`, the range the a-priori rule produces when δ ≤ E.
    pub fn within_rule_range(&self) -> bool {
        let mu2 = self.mu * self.mu;
        self.delta / self.e <= mu2 && mu2 <= 1.0
    }

    pub fn error_bound(&self) -> Result<f64> {
        error_bound(self.delta, self.p, self.mu)
    }
}

/// Result of the a-priori rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuChoice {
    pub mu: f64,
    /// Set when δ > E: the rule then yields μ > 1, outside its usual range.
    pub delta_exceeds_bound: bool,
}

/// Solves the direct problem: data `g` on `y = 1` produced by source `f`.
///
/// `f` must have zero discrete mean (within [`MEAN_TOLERANCE`]) unless
/// `demean` is set, in which case its mean is removed first.
pub fn solve_forward(f: &RealSignal, demean: bool) -> Result<RealSignal> {
    let f = if demean {
        f.demeaned()
    } else {
        let mean = f.mean();
        if mean.abs() >= MEAN_TOLERANCE {
            return Err(Error::validation(format!(
                "source has nonzero mean {mean:e}; bounded solutions need a mean-zero source (use demean)"
            )));
        }
        f.clone()
    };
    from_spectrum(&apply_multiplier(&to_spectrum(&f), forward_multiplier))
}

/// Direct inversion of the data, unstable on noisy input.
pub fn estimate_source_unregularized(g: &RealSignal) -> Result<RealSignal> {
    from_spectrum(&apply_multiplier(&to_spectrum(g), inverse_multiplier))
}

/// Inversion with the modified regularization filter of strength `mu`.
pub fn estimate_source_regularized(g: &RealSignal, mu: f64) -> Result<RealSignal> {
    crate::spectral::regularized_multiplier(0.0, mu)?;
    from_spectrum(&apply_multiplier(&to_spectrum(g), |xi| {
        regularized_unchecked(xi, mu)
    }))
}

/// A-priori rule `μ = (δ/E)^{1/(p+2)}`.
pub fn select_mu(delta: f64, e: f64, p: f64) -> Result<MuChoice> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::validation(format!(
            "parameter rule needs delta > 0, got {delta}"
        )));
    }
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::validation(format!(
            "parameter rule needs E > 0, got {e}"
        )));
    }
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::validation(format!(
            "parameter rule needs p >= 0, got {p}"
        )));
    }
    Ok(MuChoice {
        mu: (delta / e).powf(1.0 / (p + 2.0)),
        delta_exceeds_bound: delta > e,
    })
}

/// Spectral estimate of `(∫ |f̂(ξ)|² (1 + ξ²)^p dξ)^{1/2}`.
///
/// Uses `|f̂(ξ_k)|² Δξ = L |coeff(k)|²`, so that `p = 0` gives exactly
/// the discrete L2 norm by Parseval.
pub fn sobolev_norm(f: &RealSignal, p: f64) -> f64 {
    let sp = to_spectrum(f);
    let length = f.grid().length();
    let sum: f64 = sp
        .modes()
        .map(|(_, xi, c)| c.norm_sqr() * (1.0 + xi * xi).powf(p))
        .sum();
    (length * sum).sqrt()
}

/// Error estimate `2 δ^{p/(p+2)} (1 + ½ max{1, μ^{2−p}})` for the rule's μ.
pub fn error_bound(delta: f64, p: f64, mu: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::validation(format!(
            "error bound needs delta > 0, got {delta}"
        )));
    }
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::validation(format!(
            "error bound needs p >= 0, got {p}"
        )));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::validation(format!(
            "error bound needs mu > 0, got {mu}"
        )));
    }
    let tail = 1.0f64.max(mu.powf(2.0 - p));
    Ok(2.0 * delta.powf(p / (p + 2.0)) * (1.0 + 0.5 * tail))
}

/// [`error_bound`] carried to a general `H^p` bound `E`: both error terms
/// (`δ/μ²` and `E μ^p`) pick up `E^{2/(p+2)}` when `μ = (δ/E)^{1/(p+2)}`.
pub fn error_bound_scaled(delta: f64, e: f64, p: f64, mu: f64) -> Result<f64> {
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::validation(format!(
            "error bound needs E > 0, got {e}"
        )));
    }
    Ok(e.powf(2.0 / (p + 2.0)) * error_bound(delta, p, mu)?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::Grid;

    fn cosine() -> RealSignal {
        RealSignal::from_fn(Grid::standard(), f64::cos).unwrap()
    }

    fn max_diff(a: &RealSignal, b: &[f64]) -> f64 {
        a.values()
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn forward_cosine_modes() {
        let g = Grid::standard();
        let out = solve_forward(&cosine(), false).unwrap();
        let expected: Vec<f64> = g
            .points()
            .map(|x| (1.0 - (-1.0f64).exp()) * x.cos())
            .collect();
        assert!(max_diff(&out, &expected) < 1e-10);

        let f2 = RealSignal::from_fn(g, |x| (2.0 * x).cos()).unwrap();
        let factor = (1.0 - (-2.0f64).exp()) / 4.0;
        assert!((factor - 0.21617).abs() < 1e-5);
        let expected: Vec<f64> = g.points().map(|x| factor * (2.0 * x).cos()).collect();
        assert!(max_diff(&solve_forward(&f2, false).unwrap(), &expected) < 1e-12);

        let zero = solve_forward(&RealSignal::zeros(g), false).unwrap();
        assert!(zero.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn forward_rejects_nonzero_mean() {
        let s = RealSignal::from_fn(Grid::standard(), |x| 1.0 + x.cos()).unwrap();
        let err = solve_forward(&s, false).unwrap_err().to_string();
        assert!(err.contains("mean"), "{err}");
        let out = solve_forward(&s, true).unwrap();
        assert!(out.mean().abs() < 1e-14);
    }

    #[test]
    fn regularized_cosine_scaling() {
        let g = Grid::standard();
        let data = solve_forward(&cosine(), false).unwrap();
        let est0 = estimate_source_regularized(&data, 0.0).unwrap();
        assert!(max_diff(&est0, cosine().values()) < 1e-8);
        let est1 = estimate_source_regularized(&data, 1.0).unwrap();
        let half: Vec<f64> = g.points().map(|x| 0.5 * x.cos()).collect();
        assert!(max_diff(&est1, &half) < 1e-8);
        assert!(estimate_source_regularized(&data, -1.0).is_err());
    }

    #[test]
    fn unregularized_recovers_cosine() {
        let data = solve_forward(&cosine(), false).unwrap();
        let est = estimate_source_unregularized(&data).unwrap();
        assert!(max_diff(&est, cosine().values()) < 1e-8);
        let zero = estimate_source_unregularized(&RealSignal::zeros(Grid::standard())).unwrap();
        assert!(zero.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rule_values() {
        assert_eq!(select_mu(1.0, 1.0, 3.7).unwrap().mu, 1.0);
        let m = select_mu(0.015, 1.0, 1.0).unwrap();
        assert!((m.mu - 0.015f64.cbrt()).abs() < 1e-15);
        assert!((m.mu - 0.24662).abs() < 1e-5);
        assert!(!m.delta_exceeds_bound);
        let m = select_mu(0.05, 1.0, 2.0).unwrap();
        assert!((m.mu - 0.47287).abs() < 1e-5);
        let m = select_mu(2.0, 1.0, 1.0).unwrap();
        assert!(m.mu > 1.0 && m.delta_exceeds_bound);
        assert!(select_mu(0.0, 1.0, 1.0).is_err());
        assert!(select_mu(0.1, 0.0, 1.0).is_err());
        assert!(select_mu(0.1, 1.0, -1.0).is_err());
    }

    #[test]
    fn reg_params() {
        let p = RegParams::from_rule(0.01, 1.0, 2.0).unwrap();
        assert!(p.within_rule_range());
        assert!((p.error_bound().unwrap() - 0.3).abs() < 1e-12);
        assert!(RegParams::new(-1.0, 1.0, 1.0, 0.0).is_err());
        assert!(RegParams::new(0.1, 0.0, 1.0, 0.0).is_err());
        assert!(RegParams::new(0.1, 1.0, 1.0, -0.5).is_err());
    }

    #[test]
    fn sobolev_norm_of_cosine() {
        assert_eq!(sobolev_norm(&RealSignal::zeros(Grid::standard()), 2.0), 0.0);
        assert!((sobolev_norm(&cosine(), 0.0) - PI.sqrt()).abs() < 1e-10);
        assert!((sobolev_norm(&cosine(), 2.0) - 2.0 * PI.sqrt()).abs() < 1e-10);
        assert!((sobolev_norm(&cosine(), 1.0) - (2.0 * PI).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn bound_values() {
        let mu = select_mu(0.01, 1.0, 2.0).unwrap().mu;
        assert!((error_bound(0.01, 2.0, mu).unwrap() - 0.3).abs() < 1e-12);
        let mu = 0.1f64.cbrt();
        assert!((mu - 0.46416).abs() < 1e-5);
        let b = error_bound(0.1, 1.0, mu).unwrap();
        assert!((b - 3.0 * mu).abs() < 1e-12);
        assert!((b - 1.39248).abs() < 1e-5);
        assert_eq!(error_bound(1.0, 1.0, 1.0).unwrap(), 3.0);
        assert!(error_bound(0.0, 1.0, 1.0).is_err());
        assert!(error_bound(0.1, -1.0, 1.0).is_err());
        assert!(error_bound(0.1, 1.0, 0.0).is_err());
        assert_eq!(error_bound_scaled(0.1, 1.0, 1.0, mu).unwrap(), b);
    }
}
