use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::{Grid, RealSignal};
use crate::error::{Error, Result};

/// Fourier-series coefficients of a grid signal.
///
/// Normalization: `coeff(k) = (1/n) Σ_j s_j e^{−2πi jk/n}`, so that
/// `s_j = Σ_k coeff(k) e^{iξ_k (x_j − x_min)}` with `ξ_k = 2πk/L`. The
/// continuous transform of the periodic signal relates to these by
/// `ĝ(ξ_k) = L/√(2π) · e^{−iξ_k x_min} · coeff(k)` (see `oracle`).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    /// Builds a spectrum from coefficients given in storage order
    /// (`0, 1, …, n/2−1, −n/2, …, −1`).
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::validation(format!(
                "spectrum has {} coefficients but grid has n = {}",
                coeffs.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Coefficients in storage order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn index(&self, k: i64) -> usize {
        let n = self.grid.n() as i64;
        assert!(
            (-n / 2..n / 2).contains(&k),
            "wavenumber {k} outside [-{}, {})",
            n / 2,
            n / 2
        );
        k.rem_euclid(n) as usize
    }

    /// Coefficient of wavenumber `k ∈ [−n/2, n/2)`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs[self.index(k)]
    }

    /// `(k, ξ_k, coeff)` triples in storage order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, f64, Complex64)> + '_ {
        self.grid
            .wavenumbers()
            .zip(&self.coeffs)
            .map(|(k, c)| (k, self.grid.frequency(k), *c))
    }

    pub fn peak_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Whether `coeff(−k) = conj(coeff(k))` for all k, and the Nyquist
    /// coefficient is real, within `rel_tol` of the peak magnitude.
    pub fn is_conjugate_symmetric(&self, rel_tol: f64) -> bool {
        let scale = self.peak_magnitude().max(f64::MIN_POSITIVE);
        let half = self.grid.n() as i64 / 2;
        let paired =
            (1..half).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= rel_tol * scale);
        paired
            && self.coeff(-half).im.abs() <= rel_tol * scale
            && self.coeff(0).im.abs() <= rel_tol * scale
    }
}

fn fft(buffer: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(buffer.len())
    } else {
        planner.plan_fft_forward(buffer.len())
    };
    plan.process(buffer);
}

pub fn to_spectrum(signal: &RealSignal) -> Spectrum {
    let n = signal.len() as f64;
    let mut buf: Vec<Complex64> = signal
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft(&mut buf, false);
    for c in &mut buf {
        *c /= n;
    }
    Spectrum {
        grid: *signal.grid(),
        coeffs: buf,
    }
}

/// Relative bound on the imaginary part left after synthesis. Spectra that
/// leave more than this are not the transform of a real signal.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

pub fn from_spectrum(spectrum: &Spectrum) -> Result<RealSignal> {
    let mut buf = spectrum.coeffs.clone();
    fft(&mut buf, true);
    let peak = buf.iter().map(|c| c.re.abs()).fold(1.0, f64::max);
    if let Some((j, c)) = buf
        .iter()
        .enumerate()
        .find(|(_, c)| c.im.abs() > IMAG_RESIDUE_TOL * peak)
    {
        return Err(Error::validation(format!(
            "spectrum is not conjugate symmetric: sample {j} has imaginary part {}",
            c.im
        )));
    }
    RealSignal::new(spectrum.grid, buf.into_iter().map(|c| c.re).collect())
}

/// Multiplies every coefficient by `m(ξ_k)`. `m` is expected to be real and
/// even so that conjugate symmetry survives.
pub fn apply_multiplier(spectrum: &Spectrum, m: impl Fn(f64) -> f64) -> Spectrum {
    let coeffs = spectrum.modes().map(|(_, xi, c)| c * m(xi)).collect();
    Spectrum {
        grid: spectrum.grid,
        coeffs,
    }
}
