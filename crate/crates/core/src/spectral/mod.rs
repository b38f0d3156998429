//! Periodic grids, the discrete Fourier pair and the Fourier multipliers
//! that define the forward map and both inverters.

mod grid;
mod multiplier;
mod transform;

pub use grid::{Grid, RealSignal};
pub(crate) use multiplier::regularized_unchecked;
pub use multiplier::{forward_multiplier, inverse_multiplier, regularized_multiplier};
pub use transform::{apply_multiplier, from_spectrum, to_spectrum, Spectrum};
