//! JSON run configuration for simulation sweeps.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelDistribution, EveMode, SignalParams};
use crate::error::{Error, Result};
use crate::sim::SweepConfig;
use crate::subspace::Tolerance;
use crate::theory::AntennaConfig;

/// Power grid in dB, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerGrid {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl Default for PowerGrid {
    fn default() -> Self {
        Self {
            start_db: 60.0,
            stop_db: 100.0,
            step_db: 10.0,
        }
    }
}

impl PowerGrid {
    pub fn validate(&self) -> Result<()> {
        let finite = self.start_db.is_finite() && self.stop_db.is_finite() && self.step_db.is_finite();
        if !finite || self.step_db <= 0.0 || self.stop_db < self.start_db {
            return Err(Error::InvalidConfig(format!(
                "power grid needs finite start <= stop and step > 0, got {}..{} step {}",
                self.start_db, self.stop_db, self.step_db
            )));
        }
        if (self.stop_db - self.start_db) / self.step_db > 10_000.0 {
            return Err(Error::InvalidConfig(
                "power grid has more than 10000 points".into(),
            ));
        }
        Ok(())
    }

    /// Grid points `start + k * step`, computed without accumulating
    /// rounding error.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start_db + self.step_db * k as f64).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

fn default_alpha() -> f64 {
    0.5
}
fn default_sigma2() -> f64 {
    1.0
}
fn default_trials() -> u64 {
    30
}
fn default_eve_uses() -> u64 {
    4
}
fn default_slope_tolerance() -> f64 {
    0.15
}

/// Everything a simulation run needs. Only `config` is required in JSON;
/// every other field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub config: AntennaConfig,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
    #[serde(default)]
    pub p_grid: PowerGrid,
    /// Regression window in dB; defaults to the whole grid.
    #[serde(default)]
    pub window_db: Option<(f64, f64)>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub mode: EveMode,
    /// Eavesdropper channel draws averaged per trial in time-varying mode.
    #[serde(default = "default_eve_uses")]
    pub eve_uses: u64,
    #[serde(default)]
    pub tolerance: Tolerance,
    #[serde(default)]
    pub channel: ChannelDistribution,
    /// Allowed gap between the estimated slope and the closed-form value.
    #[serde(default = "default_slope_tolerance")]
    pub slope_tolerance: f64,
    #[serde(default)]
    pub output: OutputPaths,
}

impl RunConfig {
    pub fn new(config: AntennaConfig) -> Self {
        Self {
            config,
            alpha: default_alpha(),
            sigma2: default_sigma2(),
            p_grid: PowerGrid::default(),
            window_db: None,
            trials: default_trials(),
            master_seed: 0,
            mode: EveMode::default(),
            eve_uses: default_eve_uses(),
            tolerance: Tolerance::default(),
            channel: ChannelDistribution::default(),
            slope_tolerance: default_slope_tolerance(),
            output: OutputPaths::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("run config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        SignalParams::new(1.0, self.alpha, self.sigma2)?;
        self.p_grid.validate()?;
        self.tolerance.validate()?;
        self.channel.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.eve_uses == 0 {
            return Err(Error::InvalidConfig("eve_uses must be at least 1".into()));
        }
        if !(self.slope_tolerance > 0.0 && self.slope_tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "slope_tolerance must be positive, got {}",
                self.slope_tolerance
            )));
        }
        if let Some((lo, hi)) = self.window_db {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidConfig(format!("window [{lo}, {hi}] dB is empty")));
            }
        }
        Ok(())
    }

    pub fn window(&self) -> (f64, f64) {
        self.window_db
            .unwrap_or((self.p_grid.start_db, self.p_grid.stop_db))
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            config: self.config,
            sig: SignalParams {
                p: 1.0,
                alpha: self.alpha,
                sigma2: self.sigma2,
            },
            p_grid_db: self.p_grid.points(),
            trials: self.trials,
            master_seed: self.master_seed,
            mode: self.mode,
            eve_uses: self.eve_uses,
            tol: self.tolerance,
            dist: self.channel,
        }
    }
}
