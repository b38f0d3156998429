//! The three Fourier multipliers of the half-plane source problem.
//!
//! With `u(x, 0) = 0`, boundedness as `y → ∞` and a source depending on `x`
//! only, each mode solves `u'' = ξ²u − f̂`, giving the trace
//! `ĝ(ξ) = (1 − e^{−|ξ|}) / ξ² · f̂(ξ)` on `y = 1`. The kernel depends on
//! `|ξ|`, never on the signed frequency. All three multipliers are set to
//! zero at `ξ = 0`.

use crate::error::{Error, Result};

/// `1 − e^{−|ξ|}`, free of cancellation for small `|ξ|`.
fn one_minus_decay(xi: f64) -> f64 {
    -(-xi.abs()).exp_m1()
}

/// Data from source: `(1 − e^{−|ξ|}) / ξ²`, and 0 at `ξ = 0`.
pub fn forward_multiplier(xi: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    one_minus_decay(xi) / (xi * xi)
}

/// Unregularized inversion: `ξ² / (1 − e^{−|ξ|})`, and 0 at `ξ = 0`.
/// Grows like `ξ²`; this is what makes the problem ill-posed.
pub fn inverse_multiplier(xi: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    xi * xi / one_minus_decay(xi)
}

/// Regularized inversion: `ξ² / ((1 − e^{−|ξ|})(1 + ξ²μ²))`.
pub fn regularized_multiplier(xi: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(regularized_unchecked(xi, mu))
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::validation(format!(
            "regularization parameter mu must be finite and >= 0, got {mu}"
        )));
    }
    Ok(())
}

pub(crate) fn regularized_unchecked(xi: f64, mu: f64) -> f64 {
    inverse_multiplier(xi) / (1.0 + xi * xi * mu * mu)
}
