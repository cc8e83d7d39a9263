//! Self-check suite: closed form vs case analysis, allocation audits,
//! precoder residuals and ranks over random seeds, and optional quick slope
//! checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::{allocate_jamming, audit_allocation};
use crate::channel::{sample_channels, ChannelDistribution, EveMode, Lane, RngStream};
use crate::error::Result;
use crate::precoder::{build_precoders, diagnose};
use crate::sim::{estimate_dof, sweep, SweepConfig};
use crate::subspace::Tolerance;
use crate::theory::{classify, regime_table, sum_sdof, upper_bounds, AntennaConfig, Dof};

/// Precoder checks are run only up to this many antennas per node.
pub const PRECODER_MAX_ANTENNAS: usize = 5;

/// Configurations and expected slopes for the quick Monte Carlo checks.
pub const SLOPE_SET: [(usize, usize, usize, usize); 7] = [
    (1, 1, 1, 1),
    (2, 2, 4, 1),
    (2, 2, 3, 1),
    (2, 2, 3, 2),
    (4, 1, 2, 1),
    (5, 1, 2, 5),
    (3, 3, 2, 3),
];

pub type Formula = fn(&AntennaConfig) -> Dof;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_antennas: usize,
    pub seeds: u64,
    /// Adds quick slope checks.
    pub full: bool,
    /// The closed form under test.
    pub formula: Formula,
    pub tol: Tolerance,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_antennas: 5,
            seeds: 20,
            full: false,
            formula: sum_sdof,
            tol: Tolerance::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    /// Largest residual or deviation seen, where the check has one.
    pub worst_residual: Option<f64>,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_antennas: usize,
    pub seeds: u64,
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    worst: Option<f64>,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn residual(&mut self, r: f64) {
        self.worst = Some(self.worst.map_or(r, |w| w.max(r)));
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        if let Some(r) = other.worst {
            self.residual(r);
        }
        if self.first.is_none() {
            self.first = other.first;
        }
        self
    }

    fn finish(self, name: &str) -> VerifyCheck {
        VerifyCheck {
            name: name.to_string(),
            passed: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            worst_residual: self.worst,
            first_failure: self.first,
        }
    }
}

/// Every config with `1 <= m1, m2, n <= max` and `0 <= n_e <= 2 max`.
pub fn config_grid(max: usize) -> Vec<AntennaConfig> {
    let mut out = Vec::new();
    for m1 in 1..=max {
        for m2 in 1..=max {
            for n in 1..=max {
                for n_e in 0..=2 * max {
                    out.push(AntennaConfig { m1, m2, n, n_e });
                }
            }
        }
    }
    out
}

pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    opts.tol.validate()?;
    let grid = config_grid(opts.max_antennas);
    let f = opts.formula;
    let mut checks = Vec::new();

    let mut t = Tally::default();
    for c in &grid {
        let label = classify(c);
        let want = label.case_value(c);
        t.record(f(c) == want, || {
            format!("{c}: formula {} but case {} gives {want}", f(c), label.regime)
        });
    }
    checks.push(t.finish("closed_form_vs_cases"));

    let mut t = Tally::default();
    for c in &grid {
        let (b1, b2, b3) = upper_bounds(c);
        let cap = b1.min(b2).min(b3).clamp_zero();
        let d = f(c);
        t.record(d >= Dof::ZERO && d <= cap, || {
            format!("{c}: {d} outside [0, max(0, min({b1}, {b2}, {b3}))]")
        });
    }
    checks.push(t.finish("upper_bounds"));

    let mut t = Tally::default();
    for row in regime_table(opts.max_antennas) {
        let c = row.config;
        let ok = row.sdof == f(&c) && row.label == classify(&c);
        t.record(ok, || format!("{c}: table {} vs formula {}", row.sdof, f(&c)));
    }
    checks.push(t.finish("regime_table"));

    let mut t = Tally::default();
    for c in &grid {
        let alloc = allocate_jamming(c);
        let audit = audit_allocation(&alloc, c);
        let ok = audit.all_passed() && alloc.sum_streams() == f(c);
        t.record(ok, || match audit.failures().next() {
            Some(bad) => format!("{c}: {} ({})", bad.identity, bad.detail),
            None => format!(
                "{c}: allocation carries {} streams, formula {}",
                alloc.sum_streams(),
                f(c)
            ),
        });
    }
    checks.push(t.finish("allocation_audit"));

    if opts.max_antennas <= PRECODER_MAX_ANTENNAS {
        checks.push(precoder_check(&grid, opts.seeds, opts.tol));
    }

    if opts.full {
        checks.push(slope_check(f, opts.tol)?);
    }

    Ok(VerifyReport {
        max_antennas: opts.max_antennas,
        seeds: opts.seeds,
        checks,
    })
}

fn precoder_check(grid: &[AntennaConfig], seeds: u64, tol: Tolerance) -> VerifyCheck {
    let configs: Vec<&AntennaConfig> = grid.iter().filter(|c| c.n_e < c.m()).collect();
    configs
        .par_iter()
        .map(|c| {
            let mut t = Tally::default();
            let alloc = allocate_jamming(c);
            for seed in 0..seeds {
                let stream = RngStream::new(seed, 0, 0);
                let ch = sample_channels(c, stream, EveMode::StaticEve, &ChannelDistribution::default());
                let outcome = build_precoders(c, &ch, &alloc, &mut stream.rng(Lane::Precoder), tol)
                    .and_then(|pre| diagnose(&ch, &pre, tol));
                match outcome {
                    Ok(d) => {
                        t.residual(
                            d.nullspace_residual
                                .max(d.alignment_residual)
                                .max(d.unitarity_residual)
                                .max(d.zero_forcing_residual)
                                .max(d.idempotence_residual)
                                .max(d.hermitian_residual),
                        );
                        let checks = d.checks(c, &alloc);
                        let bad = checks.iter().find(|k| !k.passed);
                        t.record(bad.is_none(), || {
                            let k = bad.unwrap();
                            format!("{c} seed {seed}: {} ({})", k.identity, k.detail)
                        });
                    }
                    Err(e) => t.record(false, || format!("{c} seed {seed}: {e}")),
                }
            }
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
        .finish("precoder_algebra")
}

fn slope_check(f: Formula, tol: Tolerance) -> Result<VerifyCheck> {
    let mut t = Tally::default();
    for &(m1, m2, n, n_e) in &SLOPE_SET {
        let c = AntennaConfig::new(m1, m2, n, n_e)?;
        let mut cfg = SweepConfig::new(c, vec![60.0, 70.0, 80.0, 90.0, 100.0], 10, 1);
        cfg.tol = tol;
        let est = estimate_dof(&sweep(&cfg)?, (60.0, 100.0))?;
        let gap = (est.slope - f(&c).to_f64()).abs();
        t.residual(gap);
        t.record(gap <= 0.15 && est.leakage_slope <= 0.05, || {
            format!(
                "{c}: slope {:.3} vs {} (leakage slope {:.3})",
                est.slope,
                f(&c),
                est.leakage_slope
            )
        });
    }
    Ok(t.finish("quick_slopes"))
}

/// A deliberately wrong closed form (the second bound ignores `N_E`), used
/// to confirm that the suite catches formula regressions.
pub fn broken_sum_sdof(c: &AntennaConfig) -> Dof {
    let m = Dof::from(c.m()) - Dof::from(c.n_e);
    let z = Dof::half_of((c.m1.max(c.n) + c.m2.max(c.n)) as i64);
    m.min(z).min(Dof::from(c.n)).clamp_zero()
}
