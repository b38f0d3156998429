//! Built-in test sources and their exact (or reference) boundary data.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inversion::solve_forward;
use crate::spectral::{Grid, RealSignal};

/// Refinement factor used when boundary data have no closed form.
pub const REFERENCE_REFINEMENT: usize = 4;

/// A test source. Sampled sources are always shifted to zero discrete mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceSpec {
    /// `f(x) = cos(x)`; its data at `y = 1` are `(1 − e^{−1}) cos(x)`.
    Cosine,
    /// Triangular bump of height `height` on `[center − half_width,
    /// center + half_width]`: piecewise linear, with `f'' = 0` away from
    /// its three kinks.
    Hat {
        center: f64,
        half_width: f64,
        height: f64,
    },
}

impl SourceSpec {
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        match *self {
            SourceSpec::Cosine => Ok(()),
            SourceSpec::Hat {
                center,
                half_width,
                height,
            } => {
                if !(half_width > 0.0 && half_width.is_finite()) {
                    return Err(Error::validation(format!(
                        "hat half_width must be positive, got {half_width}"
                    )));
                }
                if !center.is_finite() || !height.is_finite() {
                    return Err(Error::validation("hat center and height must be finite"));
                }
                let (lo, hi) = (center - half_width, center + half_width);
                if lo <= grid.x_min() || hi >= grid.x_max() {
                    return Err(Error::validation(format!(
                        "hat support [{lo}, {hi}] must lie inside ({}, {})",
                        grid.x_min(),
                        grid.x_max()
                    )));
                }
                Ok(())
            }
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match *self {
            SourceSpec::Cosine => x.cos(),
            SourceSpec::Hat {
                center,
                half_width,
                height,
            } => height * (1.0 - (x - center).abs() / half_width).max(0.0),
        }
    }
}

pub fn sample_source(spec: &SourceSpec, grid: &Grid) -> Result<RealSignal> {
    spec.validate(grid)?;
    Ok(RealSignal::from_fn(*grid, |x| spec.eval(x))?.demeaned())
}

/// Whether cos(x) is periodic on the grid's interval.
fn spans_whole_periods(grid: &Grid) -> bool {
    let periods = grid.length() / (2.0 * PI);
    periods >= 0.5 && (periods - periods.round()).abs() <= 1e-12 * periods
}

/// Boundary data `g = u(·, 1)` for a built-in source.
///
/// The cosine source uses the closed-form trace when the interval holds a
/// whole number of periods; otherwise (and for the hat) the data are
/// computed by the forward solver on a grid refined
/// [`REFERENCE_REFINEMENT`] times and restricted back.
pub fn exact_data(spec: &SourceSpec, grid: &Grid) -> Result<RealSignal> {
    spec.validate(grid)?;
    match spec {
        SourceSpec::Cosine if spans_whole_periods(grid) => {
            let amp = -(-1.0f64).exp_m1();
            RealSignal::from_fn(*grid, |x| amp * x.cos())
        }
        _ => {
            let fine = grid.refined(REFERENCE_REFINEMENT)?;
            let f = sample_source(spec, &fine)?;
            solve_forward(&f, false)?.restrict(REFERENCE_REFINEMENT)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_on_eight_points() {
        let g = Grid::new(8, 0.0, 2.0 * PI).unwrap();
        let s = sample_source(&SourceSpec::Cosine, &g).unwrap();
        let h = 2f64.sqrt() / 2.0;
        let expected = [1.0, h, 0.0, -h, -1.0, -h, 0.0, h];
        for (v, e) in s.values().iter().zip(expected) {
            assert!((v - e).abs() < 1e-15, "{v} vs {e}");
        }
    }

    #[test]
    fn hat_mean_shift() {
        let g = Grid::standard();
        let spec = SourceSpec::Hat {
            center: PI,
            half_width: 1.0,
            height: 1.0,
        };
        let s = sample_source(&spec, &g).unwrap();
        assert!(s.mean().abs() < 1e-12);
        let analytic_shift = 1.0 * 1.0 / (2.0 * PI);
        let peak = s.values().iter().cloned().fold(f64::MIN, f64::max);
        // π is a grid point, so the sampled peak is exactly h − shift.
        assert!(
            (peak - (1.0 - analytic_shift)).abs() < 1e-4,
            "peak = {peak}"
        );
    }

    #[test]
    fn hat_outside_domain() {
        let spec = SourceSpec::Hat {
            center: 0.1,
            half_width: 1.0,
            height: 1.0,
        };
        assert!(sample_source(&spec, &Grid::standard())
            .unwrap_err()
            .is_validation());
        assert!(exact_data(&spec, &Grid::standard()).is_err());
        let spec = SourceSpec::Hat {
            center: 3.0,
            half_width: 0.0,
            height: 1.0,
        };
        assert!(sample_source(&spec, &Grid::standard()).is_err());
    }

    #[test]
    fn cosine_data_closed_form() {
        let g = Grid::standard();
        let d = exact_data(&SourceSpec::Cosine, &g).unwrap();
        let peak = d.values().iter().cloned().fold(f64::MIN, f64::max);
        assert!((peak - 0.63212).abs() < 1e-5);
        // x_64 = π/2
        assert!(d.values()[64].abs() < 1e-15);
    }

    #[test]
    fn cosine_data_off_period_uses_reference() {
        let g = Grid::new(128, 0.0, 5.0).unwrap();
        let d = exact_data(&SourceSpec::Cosine, &g).unwrap();
        let direct =
            solve_forward(&sample_source(&SourceSpec::Cosine, &g).unwrap(), false).unwrap();
        assert_eq!(d.grid(), direct.grid());
    }
}
