//! Closed-form sum secure degrees of freedom and regime classification.
//!
//! All quantities here are exact: degrees of freedom are integers or
//! half-integers, so [`Dof`] stores them in half units.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact degrees-of-freedom value `k / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Dof {
    halves: i64,
}

impl Dof {
    pub const ZERO: Dof = Dof { halves: 0 };

    pub const fn from_int(v: i64) -> Self {
        Self { halves: 2 * v }
    }

    pub const fn from_halves(halves: i64) -> Self {
        Self { halves }
    }

    /// `v / 2`.
    pub const fn half_of(v: i64) -> Self {
        Self { halves: v }
    }

    pub const fn halves(self) -> i64 {
        self.halves
    }

    pub const fn is_integer(self) -> bool {
        self.halves % 2 == 0
    }

    pub fn numerator(self) -> i64 {
        if self.is_integer() {
            self.halves / 2
        } else {
            self.halves
        }
    }

    pub fn denominator(self) -> i64 {
        if self.is_integer() {
            1
        } else {
            2
        }
    }

    pub fn to_f64(self) -> f64 {
        self.halves as f64 / 2.0
    }

    pub fn clamp_zero(self) -> Self {
        self.max(Dof::ZERO)
    }

    /// Largest integer not above the value.
    pub fn floor(self) -> i64 {
        self.halves.div_euclid(2)
    }

    /// The value scaled by `slots`, as a whole count; `None` if not integral.
    pub fn scaled_count(self, slots: usize) -> Option<usize> {
        let scaled = self.halves * slots as i64;
        (scaled >= 0 && scaled % 2 == 0).then_some((scaled / 2) as usize)
    }
}

impl From<usize> for Dof {
    fn from(v: usize) -> Self {
        Dof::from_int(v as i64)
    }
}

impl Add for Dof {
    type Output = Dof;
    fn add(self, rhs: Dof) -> Dof {
        Dof::from_halves(self.halves + rhs.halves)
    }
}

impl Sub for Dof {
    type Output = Dof;
    fn sub(self, rhs: Dof) -> Dof {
        Dof::from_halves(self.halves - rhs.halves)
    }
}

impl std::iter::Sum for Dof {
    fn sum<I: Iterator<Item = Dof>>(iter: I) -> Dof {
        iter.fold(Dof::ZERO, Add::add)
    }
}

impl fmt::Display for Dof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.halves / 2)
        } else {
            write!(f, "{}/2", self.halves)
        }
    }
}

impl Serialize for Dof {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dof {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Dof {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("not a DoF value: {s:?}"));
        match s.split_once('/') {
            None => s.trim().parse::<i64>().map(Dof::from_int).map_err(|_| bad()),
            Some((num, "2")) => num.trim().parse::<i64>().map(Dof::half_of).map_err(|_| bad()),
            Some(_) => Err(bad()),
        }
    }
}

/// Antenna counts of one problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntennaConfig {
    /// Transmitter 1 antennas.
    pub m1: usize,
    /// Transmitter 2 antennas.
    pub m2: usize,
    /// Legitimate receiver antennas.
    pub n: usize,
    /// Largest number of antennas any eavesdropper may have.
    pub n_e: usize,
}

impl AntennaConfig {
    pub fn new(m1: usize, m2: usize, n: usize, n_e: usize) -> Result<Self> {
        let c = Self { m1, m2, n, n_e };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m1 == 0 || self.m2 == 0 || self.n == 0 {
            return Err(Error::InvalidConfig(format!(
                "antenna counts m1, m2, n must be at least 1, got {self}"
            )));
        }
        Ok(())
    }

    /// Total transmit antennas.
    pub fn m(&self) -> usize {
        self.m1 + self.m2
    }

    /// The same instance with the transmitters exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            m1: self.m2,
            m2: self.m1,
            ..*self
        }
    }

    /// Relabels so that transmitter 1 has at least as many antennas as
    /// transmitter 2. Returns whether a swap happened.
    pub fn ordered(&self) -> (Self, bool) {
        if self.m1 >= self.m2 {
            (*self, false)
        } else {
            (self.swapped(), true)
        }
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m1, self.m2, self.n, self.n_e)
    }
}

fn int(v: usize) -> i64 {
    v as i64
}

/// The three converse bounds `(M - N_E, (max(M1,N) + max(M2,N) - N_E)/2, N)`,
/// unclamped.
pub fn upper_bounds(config: &AntennaConfig) -> (Dof, Dof, Dof) {
    let AntennaConfig { m1, m2, n, n_e } = *config;
    let b1 = Dof::from_int(int(m1 + m2) - int(n_e));
    let b2 = Dof::half_of(int(m1.max(n) + m2.max(n)) - int(n_e));
    let b3 = Dof::from_int(int(n));
    (b1, b2, b3)
}

/// Sum secure degrees of freedom, clamped at zero.
pub fn sum_sdof(config: &AntennaConfig) -> Dof {
    let (b1, b2, b3) = upper_bounds(config);
    b1.min(b2).min(b3).clamp_zero()
}

/// Which closed-form case applies to a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// `D_s = M - N_E`.
    C1,
    /// `D_s = (max(M1,N) + max(M2,N) - N_E) / 2`.
    C2,
    /// `D_s = N`.
    C3,
    /// The eavesdropper has at least `M` antennas: `D_s = 0`.
    Zero,
    /// `N_E = 0`: `D_s = min(M, N)`.
    NoEavesdropper,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::C1 => "C1",
            Regime::C2 => "C2",
            Regime::C3 => "C3",
            Regime::Zero => "ZERO",
            Regime::NoEavesdropper => "NO_EAVESDROPPER",
        };
        f.write_str(s)
    }
}

/// Condition text reported for configurations not covered verbatim by any of
/// the three case conditions.
pub const BOUNDARY: &str = "boundary";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeLabel {
    pub regime: Regime,
    pub matched_condition: String,
}

impl RegimeLabel {
    fn new(regime: Regime, cond: &str) -> Self {
        Self {
            regime,
            matched_condition: cond.to_string(),
        }
    }

    pub fn is_boundary(&self) -> bool {
        self.matched_condition == BOUNDARY
    }

    /// Evaluates this label's case expression for `config`.
    pub fn case_value(&self, config: &AntennaConfig) -> Dof {
        let (b1, b2, b3) = upper_bounds(config);
        match self.regime {
            Regime::C1 => b1,
            Regime::C2 => b2,
            Regime::C3 => b3,
            Regime::Zero => Dof::ZERO,
            Regime::NoEavesdropper => Dof::from(config.m().min(config.n)),
        }
    }
}

/// Classifies a configuration.
///
/// Transmitters are relabeled so that `m1 >= m2`. Precedence: no
/// eavesdropper, zero, C3, C1, C2. Configurations that match none of the case
/// conditions (for example `m1 == n` with `m > n`) are labeled with the case
/// whose expression attains the minimum bound and reported as
/// [`BOUNDARY`].
pub fn classify(config: &AntennaConfig) -> RegimeLabel {
    let (c, _) = config.ordered();
    let (m1, m2, n, n_e) = (int(c.m1), int(c.m2), int(c.n), int(c.n_e));
    let m = m1 + m2;
    let pos = |v: i64| v.max(0);

    if n_e == 0 {
        return RegimeLabel::new(Regime::NoEavesdropper, "N_E = 0");
    }
    if n_e >= m {
        return RegimeLabel::new(Regime::Zero, "N_E >= M");
    }
    if n_e < pos(m1 - n) + pos(m2 - n) {
        return RegimeLabel::new(Regime::C3, "N_E < [M1-N]+ + [M2-N]+");
    }
    if m <= n {
        return RegimeLabel::new(Regime::C1, "M <= N");
    }
    if m1 < n && n_e >= 2 * (m - n) {
        return RegimeLabel::new(Regime::C1, "M1 < N, M > N and N_E >= 2(M-N)");
    }
    if m1 > n && m2 < n && n_e >= m1 - n + 2 * m2 {
        return RegimeLabel::new(Regime::C1, "M1 > N, M2 < N and N_E >= M1-N+2M2");
    }
    if m1 < n && n_e < 2 * (m - n) {
        return RegimeLabel::new(Regime::C2, "M1 < N and N_E < 2(M-N)");
    }
    if m1 > n && m2 < n && m1 - n <= n_e && n_e < m1 - n + 2 * m2 {
        return RegimeLabel::new(Regime::C2, "M1 > N, M2 < N and M1-N <= N_E < M1-N+2M2");
    }
    if m1 > n && m2 >= n && n_e >= m - 2 * n {
        return RegimeLabel::new(Regime::C2, "M1 > N, M2 >= N and N_E >= M-2N");
    }

    let (b1, b2, b3) = upper_bounds(&c);
    let regime = if b1 <= b2 && b1 <= b3 {
        Regime::C1
    } else if b2 <= b3 {
        Regime::C2
    } else {
        Regime::C3
    };
    RegimeLabel::new(regime, BOUNDARY)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeRow {
    pub config: AntennaConfig,
    pub label: RegimeLabel,
    pub sdof: Dof,
}

/// Every configuration with `1 <= m1, m2, n <= max_antennas` and
/// `0 <= n_e <= m1 + m2`.
pub fn regime_table(max_antennas: usize) -> Vec<RegimeRow> {
    let mut rows = Vec::new();
    for m1 in 1..=max_antennas {
        for m2 in 1..=max_antennas {
            for n in 1..=max_antennas {
                for n_e in 0..=m1 + m2 {
                    let config = AntennaConfig { m1, m2, n, n_e };
                    rows.push(RegimeRow {
                        config,
                        label: classify(&config),
                        sdof: sum_sdof(&config),
                    });
                }
            }
        }
    }
    rows
}
