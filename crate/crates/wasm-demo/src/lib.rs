//! Browser bindings for the interactive page in `www/`.
//!
//! Three operations are exposed: a single noisy reconstruction, the mean
//! error curve over μ, and the filter shape of the inversion kernels.

use poisson_source::experiments::{argmin_per_delta, run_mu_sweep, summarize, MuGrid, SweepConfig};
use poisson_source::inversion::{estimate_source_regularized, select_mu};
use poisson_source::noise::{add_noise, relative_l2_error, NoiseMode, NoiseSpec};
use poisson_source::sources::{exact_data, sample_source, SourceSpec};
use poisson_source::spectral::{inverse_multiplier, regularized_multiplier};
use poisson_source::Grid;
use wasm_bindgen::prelude::*;

fn js_err(e: poisson_source::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn source(kind: &str) -> SourceSpec {
    match kind {
        "hat" => SourceSpec::Hat {
            center: std::f64::consts::PI,
            half_width: 1.0,
            height: 1.0,
        },
        _ => SourceSpec::Cosine,
    }
}

/// One noisy data set and its regularized reconstruction.
#[wasm_bindgen]
pub struct Reconstruction {
    x: Vec<f64>,
    truth: Vec<f64>,
    data: Vec<f64>,
    estimate: Vec<f64>,
    rel_error: f64,
}

#[wasm_bindgen]
impl Reconstruction {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn truth(&self) -> Vec<f64> {
        self.truth.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn data(&self) -> Vec<f64> {
        self.data.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn estimate(&self) -> Vec<f64> {
        self.estimate.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn rel_error(&self) -> f64 {
        self.rel_error
    }
}

pub fn reconstruct_impl(
    kind: &str,
    n: usize,
    delta: f64,
    mu: f64,
    seed: u64,
) -> poisson_source::Result<Reconstruction> {
    let grid = Grid::new(n, 0.0, 2.0 * std::f64::consts::PI)?;
    let spec = source(kind);
    let truth = sample_source(&spec, &grid)?;
    let noisy = add_noise(
        &exact_data(&spec, &grid)?,
        &NoiseSpec::new(delta, seed, NoiseMode::Iid)?,
    );
    let estimate = estimate_source_regularized(&noisy, mu)?;
    Ok(Reconstruction {
        x: grid.points().collect(),
        rel_error: relative_l2_error(&estimate, &truth)?,
        truth: truth.into_values(),
        data: noisy.into_values(),
        estimate: estimate.into_values(),
    })
}

#[wasm_bindgen]
pub fn reconstruct(
    kind: &str,
    n: usize,
    delta: f64,
    mu: f64,
    seed: u64,
) -> Result<Reconstruction, JsError> {
    reconstruct_impl(kind, n, delta, mu, seed).map_err(js_err)
}

/// Mean relative error for `count` μ values on `[0, mu_max]`, followed by
/// the minimizing μ as the last element.
pub fn error_curve_impl(
    kind: &str,
    delta: f64,
    mu_max: f64,
    count: usize,
    replicates: usize,
    seed: u64,
) -> poisson_source::Result<Vec<f64>> {
    let config = SweepConfig {
        source: source(kind),
        deltas: vec![delta],
        mus: MuGrid::linspace(0.0, mu_max, count),
        replicates,
        base_seed: seed,
        workers: 1,
        ..SweepConfig::default()
    };
    let curve = summarize(&run_mu_sweep(&config)?);
    let best = argmin_per_delta(&curve)[0].1;
    let mut out: Vec<f64> = curve.iter().map(|c| c.mean_rel_error).collect();
    out.push(best);
    Ok(out)
}

#[wasm_bindgen]
pub fn error_curve(
    kind: &str,
    delta: f64,
    mu_max: f64,
    count: usize,
    replicates: usize,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    error_curve_impl(kind, delta, mu_max, count, replicates, seed).map_err(js_err)
}

/// Interleaved `[ξ, unregularized, regularized]` triples for
/// `ξ ∈ (0, xi_max]`.
pub fn kernel_curve_impl(mu: f64, xi_max: f64, count: usize) -> poisson_source::Result<Vec<f64>> {
    let mut out = Vec::with_capacity(3 * count);
    for i in 1..=count {
        let xi = xi_max * i as f64 / count as f64;
        out.extend([xi, inverse_multiplier(xi), regularized_multiplier(xi, mu)?]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn kernel_curve(mu: f64, xi_max: f64, count: usize) -> Result<Vec<f64>, JsError> {
    kernel_curve_impl(mu, xi_max, count).map_err(js_err)
}

/// μ from the a-priori rule with E = 1.
#[wasm_bindgen]
pub fn rule_mu(delta: f64, p: f64) -> Result<f64, JsError> {
    select_mu(delta, 1.0, p).map(|c| c.mu).map_err(js_err)
}
