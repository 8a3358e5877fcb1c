//! Run configuration: a JSON file whose keys mirror the command-line flags.
//! Flags win over the file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};
use swarmphase::macrostate::ThresholdOverrides;
use swarmphase::params::{DEFAULT_BODY_RADIUS, DEFAULT_DT, DEFAULT_EVAL_WINDOW, DEFAULT_HORIZON};
use swarmphase::sweep::InitConfig;
use swarmphase::{Behavior, Controller, ParamsSpec};

/// Every key is optional here; commands check what they need.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub controller: Option<Controller>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval_window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_stride: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_spread: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_max_attempts: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub circliness_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub speed_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nn_variance_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_sustained: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub behavior: Option<Behavior>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub palette: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_only: Option<bool>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),+ $(,)?) => {
        RunConfig { $($field: $top.$field.clone().or_else(|| $base.$field.clone())),+ }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Values set in `top` replace those in `self`.
    pub fn overlay(&self, top: &RunConfig) -> RunConfig {
        overlay!(
            self, top, seed, workers, out, controller, n, v, omega_deg, gamma, phi_deg,
            body_radius, dt, horizon, eval_window, record_stride, init_spread,
            init_max_attempts, circliness_max, speed_tol, nn_variance_max, min_sustained,
            trajectory, behavior, grid, cells, svg, csv, palette, csv_only,
        )
    }

    /// Simulation parameters; the six model parameters are required.
    pub fn params_spec(&self) -> Result<ParamsSpec> {
        fn need<T: Copy>(value: Option<T>, key: &str) -> Result<T> {
            value.ok_or_else(|| anyhow!("missing required parameter `{key}`"))
        }
        Ok(ParamsSpec {
            controller: need(self.controller, "controller")?,
            n: need(self.n, "n")?,
            v: need(self.v, "v")?,
            omega_deg: need(self.omega_deg, "omega_deg")?,
            gamma: need(self.gamma, "gamma")?,
            phi_deg: need(self.phi_deg, "phi_deg")?,
            body_radius: self.body_radius.unwrap_or(DEFAULT_BODY_RADIUS),
            dt: self.dt.unwrap_or(DEFAULT_DT),
            horizon: self.horizon.unwrap_or(DEFAULT_HORIZON),
            eval_window: self.eval_window.unwrap_or(DEFAULT_EVAL_WINDOW),
        })
    }

    pub fn thresholds(&self) -> ThresholdOverrides {
        ThresholdOverrides {
            circliness_max: self.circliness_max,
            speed_tol: self.speed_tol,
            nn_variance_max: self.nn_variance_max,
            min_sustained: self.min_sustained,
        }
    }

    pub fn init(&self) -> InitConfig {
        let d = InitConfig::default();
        InitConfig {
            spread: self.init_spread.unwrap_or(d.spread),
            max_attempts: self.init_max_attempts.unwrap_or(d.max_attempts),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}
