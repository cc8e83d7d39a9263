//! CSV sample files and the simulation summary.

use std::fs;
use std::io::Write;
use std::path::Path;

use sdoflab_core::sim::GridMean;
use sdoflab_core::{Dof, DofEstimate, RateSample};
use serde::Serialize;

use crate::CliError;

pub const CSV_HEADER: &str = "p_db,trial,legit_rate_bits,eve_leakage_bits";

/// One header row and one row per sample. Floats use Rust's shortest
/// round-trip formatting, which is locale independent.
pub fn samples_csv(samples: &[RateSample]) -> String {
    let mut out = String::with_capacity(48 * (samples.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.p_db, s.trial, s.legit_rate, s.eve_leakage
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    pub p_db: f64,
    pub mean_legit_rate_bits: f64,
    pub mean_eve_leakage_bits: f64,
}

impl From<&GridMean> for GridPoint {
    fn from(g: &GridMean) -> Self {
        Self {
            p_db: g.p_db,
            mean_legit_rate_bits: g.legit_rate,
            mean_eve_leakage_bits: g.eve_leakage,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub config: sdoflab_core::AntennaConfig,
    pub trials: u64,
    pub master_seed: u64,
    pub mode: sdoflab_core::EveMode,
    pub window_db: (f64, f64),
    /// Closed-form sum SDoF as an exact fraction.
    pub theory: Dof,
    pub theory_value: f64,
    /// Legitimate streams actually transmitted, `d1 + d2`.
    pub legit_streams: Dof,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub leakage_slope: f64,
    /// Largest minus smallest trial-mean leakage over the window.
    pub leakage_range_bits: f64,
    pub difference: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub grid: Vec<GridPoint>,
}

impl Summary {
    pub fn new(
        cfg: &sdoflab_core::RunConfig,
        est: &DofEstimate,
        means: &[GridMean],
        legit_streams: Dof,
    ) -> Self {
        let theory = sdoflab_core::sum_sdof(&cfg.config);
        let (lo, hi) = est.window;
        let leak: Vec<f64> = means
            .iter()
            .filter(|g| g.p_db >= lo && g.p_db <= hi)
            .map(|g| g.eve_leakage)
            .collect();
        let range = leak.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - leak.iter().cloned().fold(f64::INFINITY, f64::min);
        let difference = (est.slope - theory.to_f64()).abs();
        Self {
            config: cfg.config,
            trials: cfg.trials,
            master_seed: cfg.master_seed,
            mode: cfg.mode,
            window_db: est.window,
            theory,
            theory_value: theory.to_f64(),
            legit_streams,
            slope: est.slope,
            intercept: est.intercept,
            r_squared: est.r_squared,
            leakage_slope: est.leakage_slope,
            leakage_range_bits: range,
            difference,
            tolerance: cfg.slope_tolerance,
            pass: difference <= cfg.slope_tolerance,
            grid: means.iter().map(GridPoint::from).collect(),
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(&format!("cannot write {}", path.display()), e))
}

pub fn write_stream(out: &mut dyn Write, contents: &str) -> Result<(), CliError> {
    out.write_all(contents.as_bytes())
        .map_err(|e| CliError::io("cannot write output", e))
}
