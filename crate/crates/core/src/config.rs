//! Flat TOML run configuration shared by the `sweep` and `figures`
//! commands. `poisson-source dump-config` prints the defaults.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{MuGrid, SweepConfig, FIGURE_MU_COUNT};
use crate::noise::NoiseMode;
use crate::sources::SourceSpec;
use crate::spectral::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Cosine,
    Hat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub source: SourceKind,
    pub hat_center: f64,
    pub hat_half_width: f64,
    pub hat_height: f64,
    pub deltas: Vec<f64>,
    /// Explicit μ values; ignored when `mu_rule` is set.
    pub mus: Vec<f64>,
    /// Choose μ by the a-priori rule with `rule_e` for each of `p_values`.
    pub mu_rule: bool,
    pub rule_e: f64,
    pub p_values: Vec<f64>,
    pub replicates: usize,
    pub base_seed: u64,
    pub noise_mode: NoiseMode,
    /// 0 uses every available core.
    pub workers: usize,
    pub output: PathBuf,
    pub figures_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let MuGrid::Values(mus) = MuGrid::linspace(0.0, 40.0, FIGURE_MU_COUNT) else {
            unreachable!()
        };
        Self {
            n: 256,
            x_min: 0.0,
            x_max: 2.0 * PI,
            source: SourceKind::Cosine,
            hat_center: PI,
            hat_half_width: 1.0,
            hat_height: 1.0,
            deltas: vec![0.015, 0.05, 0.1],
            mus,
            mu_rule: false,
            rule_e: 1.0,
            p_values: vec![1.0, 2.0],
            replicates: 20,
            base_seed: 42,
            noise_mode: NoiseMode::Iid,
            workers: 0,
            output: PathBuf::from("sweep.csv"),
            figures_dir: PathBuf::from("figures"),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::validation(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config fields are all representable in TOML")
    }

    pub fn source_spec(&self) -> SourceSpec {
        match self.source {
            SourceKind::Cosine => SourceSpec::Cosine,
            SourceKind::Hat => SourceSpec::Hat {
                center: self.hat_center,
                half_width: self.hat_half_width,
                height: self.hat_height,
            },
        }
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let config = SweepConfig {
            source: self.source_spec(),
            grid: Grid::new(self.n, self.x_min, self.x_max)?,
            deltas: self.deltas.clone(),
            mus: if self.mu_rule {
                MuGrid::Rule { e: self.rule_e }
            } else {
                MuGrid::Values(self.mus.clone())
            },
            p_values: self.p_values.clone(),
            replicates: self.replicates,
            base_seed: self.base_seed,
            noise_mode: self.noise_mode,
            workers: self.workers,
        };
        config.validate()?;
        Ok(config)
    }
}
