//! Rates after zero-forcing, eavesdropper leakage, power sweeps and high-SNR
//! slope regression.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::allocate_jamming;
use crate::channel::{
    received_covariances, sample_channels, ChannelDistribution, ChannelRealization, EveMode, Lane, RngStream,
    SignalParams,
};
use crate::error::{Error, Result};
use crate::precoder::{build_precoders, PrecoderSet};
use crate::subspace::{hermitian_part, CMatrix, Tolerance, C64};
use crate::theory::AntennaConfig;

/// `log2 det(I + a)` for Hermitian positive semidefinite `a`, through a
/// Cholesky factor so that large determinants never overflow.
pub fn log2_det_identity_plus(a: &CMatrix) -> Result<f64> {
    let n = a.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let m = CMatrix::identity(n, n) + hermitian_part(a);
    let chol = m.cholesky().ok_or_else(|| {
        Error::NumericalFailure("I + A is not positive definite; covariance is not PSD".into())
    })?;
    let l = chol.l_dirty();
    let mut sum = 0.0;
    for i in 0..n {
        // complex Cholesky takes complex square roots instead of failing
        let d = l[(i, i)];
        if d.re.is_nan() || d.re <= 0.0 || d.im.abs() > 1e-12 * d.re {
            return Err(Error::NumericalFailure(
                "I + A is not positive definite; covariance is not PSD".into(),
            ));
        }
        sum += d.re.log2();
    }
    Ok(2.0 * sum)
}

/// Noise variance per signalling dimension: a real component of complex
/// noise carries half of it.
fn effective_noise(pre: &PrecoderSet, sig: &SignalParams) -> f64 {
    sig.sigma2 / pre.slots as f64
}

/// Sum rate of the legitimate streams after the zero-forcing projector,
/// `1/2 log2 det(I + U S U^H / sigma2)`, in bits per channel use.
pub fn legit_rate(ch: &ChannelRealization, pre: &PrecoderSet, sig: &SignalParams) -> Result<f64> {
    sig.validate()?;
    let cov = received_covariances(ch, pre, sig)?;
    let noise = effective_noise(pre, sig);
    let s = &pre.u * &cov.legit_signal * pre.u.adjoint() * C64::from(1.0 / noise);
    let bits = 0.5 * log2_det_identity_plus(&s)? / pre.slots as f64;
    Ok(bits.max(0.0))
}

/// Information leaked to the eavesdropper,
/// `1/2 log2 det(sigma2 I + K_L + K_J) - 1/2 log2 det(sigma2 I + K_J)`
/// with `K_L`, `K_J` the received signal and jamming covariances; clamped
/// at zero.
pub fn eve_leakage(ch: &ChannelRealization, pre: &PrecoderSet, sig: &SignalParams) -> Result<f64> {
    sig.validate()?;
    if ch.g1.nrows() == 0 {
        return Ok(0.0);
    }
    let cov = received_covariances(ch, pre, sig)?;
    let scale = C64::from(1.0 / effective_noise(pre, sig));
    let total = (&cov.eve_signal + &cov.eve_jam) * scale;
    let jam = &cov.eve_jam * scale;
    let bits = 0.5 * (log2_det_identity_plus(&total)? - log2_det_identity_plus(&jam)?) / pre.slots as f64;
    Ok(bits.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    pub p_db: f64,
    pub trial: u64,
    /// Bits per channel use.
    pub legit_rate: f64,
    /// Bits per channel use.
    pub eve_leakage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub config: AntennaConfig,
    /// Template for `alpha` and `sigma2`; `p` is taken from the grid.
    pub sig: SignalParams,
    pub p_grid_db: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub mode: EveMode,
    /// Eavesdropper channel uses averaged per trial in time-varying mode.
    pub eve_uses: u64,
    pub tol: Tolerance,
    pub dist: ChannelDistribution,
}

impl SweepConfig {
    pub fn new(config: AntennaConfig, p_grid_db: Vec<f64>, trials: u64, master_seed: u64) -> Self {
        Self {
            config,
            sig: SignalParams::default(),
            p_grid_db,
            trials,
            master_seed,
            mode: EveMode::StaticEve,
            eve_uses: 1,
            tol: Tolerance::default(),
            dist: ChannelDistribution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        self.sig.validate()?;
        self.tol.validate()?;
        self.dist.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.p_grid_db.is_empty() {
            return Err(Error::InvalidConfig("power grid is empty".into()));
        }
        if self.p_grid_db.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidConfig("power grid has non-finite entries".into()));
        }
        if self.p_grid_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "power grid must be strictly increasing".into(),
            ));
        }
        if self.mode == EveMode::TimeVaryingEve && self.eve_uses == 0 {
            return Err(Error::InvalidConfig("eve_uses must be at least 1".into()));
        }
        Ok(())
    }
}

/// Runs every trial over the whole power grid.
///
/// Each trial draws its legitimate channels and precoders once and reuses
/// them at every grid point, so differences between grid points reflect the
/// power alone. Trials run in parallel; the output is sorted by power, then
/// trial, and does not depend on the thread count.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<RateSample>> {
    cfg.validate()?;
    let alloc = allocate_jamming(&cfg.config);
    let per_trial: Vec<Vec<RateSample>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, &alloc, trial))
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(per_trial.len() * cfg.p_grid_db.len());
    for k in 0..cfg.p_grid_db.len() {
        out.extend(per_trial.iter().map(|t| t[k]));
    }
    Ok(out)
}

fn run_trial(
    cfg: &SweepConfig,
    alloc: &crate::allocation::JammingAllocation,
    trial: u64,
) -> Result<Vec<RateSample>> {
    let stream = RngStream::new(cfg.master_seed, trial, 0);
    let ch = sample_channels(&cfg.config, stream, cfg.mode, &cfg.dist);
    let pre = build_precoders(&cfg.config, &ch, alloc, &mut stream.rng(Lane::Precoder), cfg.tol)?;
    let eve_draws: Vec<ChannelRealization> = match cfg.mode {
        EveMode::StaticEve => vec![ch.clone()],
        EveMode::TimeVaryingEve => (0..cfg.eve_uses)
            .map(|k| sample_channels(&cfg.config, stream.at_use(k + 1), cfg.mode, &cfg.dist))
            .collect(),
    };
    cfg.p_grid_db
        .iter()
        .map(|&p_db| {
            let sig = cfg.sig.with_power_db(p_db);
            let mut leak = 0.0;
            for draw in &eve_draws {
                leak += eve_leakage(draw, &pre, &sig)?;
            }
            Ok(RateSample {
                p_db,
                trial,
                legit_rate: legit_rate(&ch, &pre, &sig)?,
                eve_leakage: leak / eve_draws.len() as f64,
            })
        })
        .collect()
}

/// Trial-averaged rates at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMean {
    pub p_db: f64,
    pub legit_rate: f64,
    pub eve_leakage: f64,
    pub trials: usize,
}

/// Means per distinct `p_db`, in increasing power order.
pub fn grid_means(samples: &[RateSample]) -> Vec<GridMean> {
    let mut sorted: Vec<&RateSample> = samples.iter().collect();
    sorted.sort_by(|a, b| a.p_db.total_cmp(&b.p_db).then(a.trial.cmp(&b.trial)));
    let mut out: Vec<GridMean> = Vec::new();
    for s in sorted {
        match out.last_mut() {
            Some(g) if g.p_db == s.p_db => {
                g.legit_rate += s.legit_rate;
                g.eve_leakage += s.eve_leakage;
                g.trials += 1;
            }
            _ => out.push(GridMean {
                p_db: s.p_db,
                legit_rate: s.legit_rate,
                eve_leakage: s.eve_leakage,
                trials: 1,
            }),
        }
    }
    for g in &mut out {
        g.legit_rate /= g.trials as f64;
        g.eve_leakage /= g.trials as f64;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DofEstimate {
    /// Legitimate rate slope against `1/2 log2 P`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub leakage_slope: f64,
    pub leakage_intercept: f64,
    /// Grid points inside the window.
    pub points: usize,
}

/// Least-squares fit of the trial-averaged rates on `1/2 log2 P` over the
/// grid points with `lo <= p_db <= hi`.
pub fn estimate_dof(samples: &[RateSample], window_db: (f64, f64)) -> Result<DofEstimate> {
    let (lo, hi) = window_db;
    let means: Vec<GridMean> = grid_means(samples)
        .into_iter()
        .filter(|g| g.p_db >= lo && g.p_db <= hi)
        .collect();
    if means.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} grid points in window [{lo}, {hi}] dB, need at least 3",
            means.len()
        )));
    }
    let x: Vec<f64> = means.iter().map(|g| half_log2_power(g.p_db)).collect();
    let legit: Vec<f64> = means.iter().map(|g| g.legit_rate).collect();
    let leak: Vec<f64> = means.iter().map(|g| g.eve_leakage).collect();
    let (slope, intercept, r_squared) = least_squares(&x, &legit);
    let (leakage_slope, leakage_intercept, _) = least_squares(&x, &leak);
    Ok(DofEstimate {
        slope,
        intercept,
        r_squared,
        window: window_db,
        leakage_slope,
        leakage_intercept,
        points: means.len(),
    })
}

/// `1/2 log2 P` for `P = 10^(p_db / 10)`.
pub fn half_log2_power(p_db: f64) -> f64 {
    0.5 * p_db / 10.0 * std::f64::consts::LOG2_10
}

/// Slope, intercept and coefficient of determination of `y ~ x`.
fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r2 = if ss_tot <= f64::EPSILON * my.abs().max(1.0) {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    (slope, intercept, r2)
}
