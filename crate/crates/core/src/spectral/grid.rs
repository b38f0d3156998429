use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic sampling of `[x_min, x_max)`; the right endpoint is
/// identified with the left one and is not a sample point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    x_min: f64,
    x_max: f64,
}

impl Grid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::validation(format!(
                "grid size must be even, got n = {n}"
            )));
        }
        if n < Self::MIN_POINTS {
            return Err(Error::validation(format!(
                "grid size must be at least {}, got n = {n}",
                Self::MIN_POINTS
            )));
        }
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::validation(format!(
                "grid bounds must be finite, got [{x_min}, {x_max})"
            )));
        }
        if x_max <= x_min {
            return Err(Error::validation(format!(
                "grid requires x_max > x_min, got [{x_min}, {x_max})"
            )));
        }
        Ok(Self { n, x_min, x_max })
    }

    /// The reference grid: 256 points on `[0, 2π)`.
    pub fn standard() -> Self {
        Self {
            n: 256,
            x_min: 0.0,
            x_max: 2.0 * PI,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn spacing(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Physical frequency ξ_k = 2πk / L of integer wavenumber `k`.
    pub fn frequency(&self, k: i64) -> f64 {
        2.0 * PI * k as f64 / self.length()
    }

    /// Fundamental frequency 2π / L, the spacing of the frequency lattice.
    pub fn frequency_step(&self) -> f64 {
        2.0 * PI / self.length()
    }

    /// Largest resolvable frequency, π / Δx.
    pub fn nyquist(&self) -> f64 {
        self.frequency(self.n as i64 / 2)
    }

    /// Wavenumbers in storage order: `0, 1, …, n/2−1, −n/2, …, −1`.
    pub fn wavenumbers(&self) -> impl ExactSizeIterator<Item = i64> {
        let n = self.n;
        (0..n).map(move |i| {
            let (i, n) = (i as i64, n as i64);
            if i < n / 2 {
                i
            } else {
                i - n
            }
        })
    }

    /// Same interval sampled `factor` times more densely.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.n * factor, self.x_min, self.x_max)
    }
}

/// Real samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealSignal {
    grid: Grid,
    values: Vec<f64>,
}

impl RealSignal {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::validation(format!(
                "signal has {} samples but grid has n = {}",
                values.len(),
                grid.n()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(format!(
                "signal sample {j} is not finite ({})",
                values[j]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.n()],
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Copy with the discrete mean subtracted.
    pub fn demeaned(&self) -> Self {
        let mean = self.mean();
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v - mean).collect(),
        }
    }

    /// Every `factor`-th sample, on the correspondingly coarser grid.
    pub fn restrict(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.grid.n().is_multiple_of(factor) {
            return Err(Error::validation(format!(
                "cannot restrict n = {} by a factor of {factor}",
                self.grid.n()
            )));
        }
        let coarse = Grid::new(self.grid.n() / factor, self.grid.x_min(), self.grid.x_max())?;
        Self::new(
            coarse,
            self.values.iter().step_by(factor).copied().collect(),
        )
    }

    /// Pointwise difference `self − other`; both must share a grid.
    pub fn sub(&self, other: &RealSignal) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub(crate) fn check_same_grid(&self, other: &RealSignal) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::validation(format!(
                "signals live on different grids ({:?} vs {:?})",
                self.grid, other.grid
            )));
        }
        Ok(())
    }
}
