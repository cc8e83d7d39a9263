//! Random channel realizations and the Gaussian signal model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precoder::PrecoderSet;
use crate::subspace::{hermitian_part, real_composite, CMatrix, C64};
use crate::theory::AntennaConfig;

/// Transmit power, jamming fraction and receiver noise variance, all linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalParams {
    pub p: f64,
    pub alpha: f64,
    pub sigma2: f64,
}

impl Default for SignalParams {
    fn default() -> Self {
        Self {
            p: 1.0,
            alpha: 0.5,
            sigma2: 1.0,
        }
    }
}

impl SignalParams {
    pub fn new(p: f64, alpha: f64, sigma2: f64) -> Result<Self> {
        let s = Self { p, alpha, sigma2 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 0.0 && self.p.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "power must be finite and >= 0, got {}",
                self.p
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "sigma2 must be finite and > 0, got {}",
                self.sigma2
            )));
        }
        Ok(())
    }

    /// The same parameters at `p_db` decibels.
    pub fn with_power_db(self, p_db: f64) -> Self {
        Self {
            p: db_to_linear(p_db),
            ..self
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Whether the eavesdropper channel is redrawn every channel use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EveMode {
    #[default]
    StaticEve,
    TimeVaryingEve,
}

/// Entry distribution: circularly-symmetric complex Gaussian with the given
/// mean and variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelDistribution {
    pub mean_re: f64,
    pub mean_im: f64,
    pub variance: f64,
}

impl Default for ChannelDistribution {
    fn default() -> Self {
        Self {
            mean_re: 0.0,
            mean_im: 0.0,
            variance: 1.0,
        }
    }
}

impl ChannelDistribution {
    pub fn validate(&self) -> Result<()> {
        if self.mean_re.is_finite()
            && self.mean_im.is_finite()
            && self.variance > 0.0
            && self.variance.is_finite()
        {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "invalid channel distribution {self:?}"
            )))
        }
    }

    pub fn sample_matrix(&self, rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
        let scale = (self.variance / 2.0).sqrt();
        CMatrix::from_fn(rows, cols, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(self.mean_re + scale * re, self.mean_im + scale * im)
        })
    }
}

/// Independent random-number lanes within one stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lane {
    LegitChannel = 1,
    EveChannel = 2,
    Precoder = 3,
}

/// Identifies a reproducible random substream: `(master_seed, trial,
/// channel_use)`. Draws depend only on these values and the lane, never on
/// execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub trial: u64,
    pub channel_use: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, trial: u64, channel_use: u64) -> Self {
        Self {
            master_seed,
            trial,
            channel_use,
        }
    }

    pub fn at_use(self, channel_use: u64) -> Self {
        Self { channel_use, ..self }
    }

    pub fn rng(&self, lane: Lane) -> ChaCha8Rng {
        let mut h = splitmix64(self.master_seed);
        h = splitmix64(h ^ self.trial);
        h = splitmix64(h ^ self.channel_use);
        let mut rng = ChaCha8Rng::seed_from_u64(h);
        rng.set_stream(lane as u64);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Legitimate channels `h1` (N x M1), `h2` (N x M2) and eavesdropper channels
/// `g1` (N_E x M1), `g2` (N_E x M2) for one channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h1: CMatrix,
    pub h2: CMatrix,
    pub g1: CMatrix,
    pub g2: CMatrix,
}

impl ChannelRealization {
    /// The channels as seen by a precoding block of `slots` channel uses:
    /// unchanged for one slot, real-composite (in-phase/quadrature) form for
    /// two.
    pub fn extended(&self, slots: usize) -> ChannelRealization {
        if slots == 2 {
            ChannelRealization {
                h1: real_composite(&self.h1),
                h2: real_composite(&self.h2),
                g1: real_composite(&self.g1),
                g2: real_composite(&self.g2),
            }
        } else {
            self.clone()
        }
    }
}

/// Draws the channels for `stream`. The legitimate channels depend only on
/// `(master_seed, trial)` and stay fixed across channel uses; the
/// eavesdropper channels are redrawn per channel use in
/// [`EveMode::TimeVaryingEve`].
pub fn sample_channels(
    config: &AntennaConfig,
    stream: RngStream,
    mode: EveMode,
    dist: &ChannelDistribution,
) -> ChannelRealization {
    let mut legit = stream.at_use(0).rng(Lane::LegitChannel);
    let h1 = dist.sample_matrix(config.n, config.m1, &mut legit);
    let h2 = dist.sample_matrix(config.n, config.m2, &mut legit);
    let eve_use = match mode {
        EveMode::StaticEve => 0,
        EveMode::TimeVaryingEve => stream.channel_use,
    };
    let mut eve = stream.at_use(eve_use).rng(Lane::EveChannel);
    let g1 = dist.sample_matrix(config.n_e, config.m1, &mut eve);
    let g2 = dist.sample_matrix(config.n_e, config.m2, &mut eve);
    ChannelRealization { h1, h2, g1, g2 }
}

/// Received covariances of the signal and jamming parts at the legitimate
/// receiver and at the eavesdropper.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedCovariances {
    pub legit_signal: CMatrix,
    pub legit_jam: CMatrix,
    pub eve_signal: CMatrix,
    pub eve_jam: CMatrix,
}

/// Power per legitimate stream and per jamming stream. The signal budget
/// `(1 - alpha) p` and the jamming budget `alpha p` are each split equally.
pub fn stream_powers(pre: &PrecoderSet, sig: &SignalParams) -> (f64, f64) {
    let legit = pre.v1_l.ncols() + pre.v2_l.ncols();
    let jam = pre.v1_j.ncols() + pre.v2_j.ncols();
    let per = |budget: f64, k: usize| if k == 0 { 0.0 } else { budget / k as f64 };
    (per((1.0 - sig.alpha) * sig.p, legit), per(sig.alpha * sig.p, jam))
}

/// Transmit covariance `V Q V^H` of one precoder block.
pub fn transmit_covariance(v: &CMatrix, power: f64) -> CMatrix {
    v * v.adjoint() * C64::from(power)
}

/// Received covariances for `ch` and `pre`, in the precoder's signalling
/// domain (real-composite when `pre.slots == 2`).
pub fn received_covariances(
    ch: &ChannelRealization,
    pre: &PrecoderSet,
    sig: &SignalParams,
) -> Result<ReceivedCovariances> {
    let ch = ch.extended(pre.slots);
    check_compatible(&ch, pre)?;
    let (ps, pj) = stream_powers(pre, sig);
    let cov = |a: &CMatrix, v: &CMatrix, b: &CMatrix, w: &CMatrix, power: f64| {
        let x = a * v;
        let y = b * w;
        hermitian_part(&((&x * x.adjoint() + &y * y.adjoint()) * C64::from(power)))
    };
    Ok(ReceivedCovariances {
        legit_signal: cov(&ch.h1, &pre.v1_l, &ch.h2, &pre.v2_l, ps),
        legit_jam: cov(&ch.h1, &pre.v1_j, &ch.h2, &pre.v2_j, pj),
        eve_signal: cov(&ch.g1, &pre.v1_l, &ch.g2, &pre.v2_l, ps),
        eve_jam: cov(&ch.g1, &pre.v1_j, &ch.g2, &pre.v2_j, pj),
    })
}

/// Checks that an (already extended) realization matches a precoder set.
pub(crate) fn check_compatible(ch: &ChannelRealization, pre: &PrecoderSet) -> Result<()> {
    let ok = ch.h1.ncols() == pre.v1_l.nrows()
        && ch.h2.ncols() == pre.v2_l.nrows()
        && ch.g1.ncols() == pre.v1_j.nrows()
        && ch.g2.ncols() == pre.v2_j.nrows()
        && ch.h1.nrows() == pre.u.nrows()
        && ch.h2.nrows() == pre.u.nrows()
        && ch.g1.nrows() == ch.g2.nrows();
    if ok {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "channels h1 {:?}, h2 {:?}, g1 {:?} incompatible with precoders v1 {:?}, v2 {:?}, u {:?}",
            ch.h1.shape(),
            ch.h2.shape(),
            ch.g1.shape(),
            pre.v1_l.shape(),
            pre.v2_l.shape(),
            pre.u.shape()
        )))
    }
}
