//! Brute-force quadrature evaluation of the integral formulas, used to
//! cross-check the FFT pipeline. Slow on purpose: every transform is a
//! direct O(n · nodes) sum and no code is shared with `spectral`.
//!
//! Conventions: `ĝ(ξ) = (1/√(2π)) ∫ g(x) e^{−iξx} dx` over the grid's
//! interval and `f(x) = (1/√(2π)) ∫ e^{iξx} m(ξ) ĝ(ξ) dξ`. The map to the
//! pipeline's coefficients is `ĝ(ξ_k) = L/√(2π) · e^{−iξ_k x_min} ·
//! coeff(k)`.
//!
//! The ξ integral is a trapezoid rule whose node spacing is the lattice
//! step 2π/L; by Poisson summation that is the spacing at which the rule is
//! exact for L-periodic data. Sampled data carry no information above the
//! Nyquist frequency N, so the integrand is restricted to `[−N, N]`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, RealSignal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    xi_max: f64,
    intervals: usize,
}

impl QuadratureSpec {
    pub const MIN_INTERVALS: usize = 64;

    /// Trapezoid on `[−xi_max, xi_max]` with `intervals` equal steps. The
    /// step `2 xi_max / intervals` must equal the grid's frequency step.
    pub fn new(grid: &Grid, xi_max: f64, intervals: usize) -> Result<Self> {
        if intervals < Self::MIN_INTERVALS {
            return Err(Error::validation(format!(
                "quadrature needs at least {} intervals, got {intervals}",
                Self::MIN_INTERVALS
            )));
        }
        if !(xi_max.is_finite() && xi_max >= grid.nyquist() * (1.0 - 1e-12)) {
            return Err(Error::validation(format!(
                "xi_max = {xi_max} must cover the grid's Nyquist frequency {}",
                grid.nyquist()
            )));
        }
        let step = 2.0 * xi_max / intervals as f64;
        if (step - grid.frequency_step()).abs() > 1e-9 * grid.frequency_step() {
            return Err(Error::validation(format!(
                "node spacing {step} must equal the frequency lattice step {} (intervals = {})",
                grid.frequency_step(),
                (2.0 * xi_max / grid.frequency_step()).round()
            )));
        }
        Ok(Self { xi_max, intervals })
    }

    /// Nyquist band, widened if needed so that there are at least
    /// [`Self::MIN_INTERVALS`] intervals.
    pub fn for_grid(grid: &Grid) -> Self {
        let intervals = grid.n().max(Self::MIN_INTERVALS);
        Self {
            xi_max: intervals as f64 / 2.0 * grid.frequency_step(),
            intervals,
        }
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// `(ξ_i, weight_i)` pairs; out-of-band nodes are dropped and the
    /// nodes at ±Nyquist carry half weight.
    pub fn nodes(&self, grid: &Grid) -> Vec<(f64, f64)> {
        let h = 2.0 * self.xi_max / self.intervals as f64;
        let band = grid.nyquist() * (1.0 + 1e-12);
        let edge = grid.nyquist() * (1.0 - 1e-12);
        (0..=self.intervals)
            .map(|i| -self.xi_max + i as f64 * h)
            .filter(|xi| xi.abs() <= band)
            .map(|xi| (xi, if xi.abs() >= edge { 0.5 * h } else { h }))
            .collect()
    }
}

/// Trapezoid approximation of `(1/√(2π)) ∫_{x_min}^{x_max} s(x) e^{−iξx} dx`,
/// with the periodic endpoint value `s(x_max) = s(x_min)`.
pub fn continuous_ft(s: &RealSignal, xi_nodes: &[f64]) -> Vec<Complex64> {
    let grid = s.grid();
    let dx = grid.spacing();
    let norm = 1.0 / (2.0 * PI).sqrt();
    let v = s.values();
    xi_nodes
        .iter()
        .map(|&xi| {
            let kernel = |x: f64| Complex64::from_polar(1.0, -xi * x);
            let mut acc = 0.5 * v[0] * (kernel(grid.x_min()) + kernel(grid.x_max()));
            for (j, &vj) in v.iter().enumerate().skip(1) {
                acc += vj * kernel(grid.point(j));
            }
            acc * dx * norm
        })
        .collect()
}

/// Kernel written out directly from its closed form.
fn kernel(xi: f64, mu: f64) -> f64 {
    if xi == 0.0 {
        0.0
    } else {
        xi * xi / ((1.0 - (-xi.abs()).exp()) * (1.0 + xi * xi * mu * mu))
    }
}

pub fn invert_via_quadrature(g: &RealSignal, mu: f64, spec: &QuadratureSpec) -> Result<RealSignal> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::validation(format!("mu must be >= 0, got {mu}")));
    }
    let grid = *g.grid();
    let nodes = spec.nodes(&grid);
    let xis: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let g_hat = continuous_ft(g, &xis);
    let weighted: Vec<(f64, Complex64)> = nodes
        .iter()
        .zip(&g_hat)
        .map(|(&(xi, w), gh)| (xi, gh * (w * kernel(xi, mu))))
        .collect();
    let norm = 1.0 / (2.0 * PI).sqrt();
    let values = grid
        .points()
        .map(|x| {
            let acc: Complex64 = weighted
                .iter()
                .map(|&(xi, c)| c * Complex64::from_polar(1.0, xi * x))
                .sum();
            acc.re * norm
        })
        .collect();
    RealSignal::new(grid, values)
}

pub fn sobolev_norm_via_quadrature(f: &RealSignal, p: f64, spec: &QuadratureSpec) -> f64 {
    let nodes = spec.nodes(f.grid());
    let xis: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let f_hat = continuous_ft(f, &xis);
    nodes
        .iter()
        .zip(f_hat)
        .map(|(&(xi, w), fh)| w * fh.norm_sqr() * (1.0 + xi * xi).powf(p))
        .sum::<f64>()
        .sqrt()
}
