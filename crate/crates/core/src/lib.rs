//! Identification of a one-dimensional source `f(x)` in
//! `−u_xx − u_yy = f(x)` on the upper half-plane, with `u(x, 0) = 0`,
//! `u` bounded as `y → ∞`, from measurements `g_δ ≈ u(x, 1)`.
//!
//! The line is truncated to a periodic interval and every operator is a
//! Fourier multiplier:
//!
//! * [`inversion::solve_forward`] maps a source to its data,
//! * [`inversion::estimate_source_unregularized`] inverts directly and
//!   amplifies noise like `ξ²`,
//! * [`inversion::estimate_source_regularized`] damps that growth by
//!   `1/(1 + ξ²μ²)`, which keeps the inversion bounded by `1/μ²`.
//!
//! [`experiments`] runs the noise/μ studies and writes the figure tables;
//! [`oracle`] re-evaluates the integral formulas by brute-force quadrature.

pub mod config;
pub mod csvio;
pub mod error;
pub mod experiments;
pub mod inversion;
pub mod noise;
pub mod oracle;
pub mod sources;
pub mod spectral;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use spectral::{Grid, RealSignal, Spectrum};
