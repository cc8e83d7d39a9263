//! A single sampled design: channels, precoders and their audit, serializable
//! to JSON and re-checkable after loading.

use serde::{Deserialize, Serialize};

use crate::allocation::{allocate_jamming, audit_allocation, AuditCheck, AuditReport, JammingAllocation};
use crate::channel::{sample_channels, ChannelDistribution, ChannelRealization, EveMode, Lane, RngStream};
use crate::error::{Error, Result};
use crate::json::MatrixJson;
use crate::precoder::{build_precoders, diagnose, JamLayout, PrecoderDiagnostics, PrecoderSet};
use crate::subspace::{Subspace, Tolerance};
use crate::theory::{classify, sum_sdof, AntennaConfig, Dof, RegimeLabel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelsJson {
    pub h1: MatrixJson,
    pub h2: MatrixJson,
    pub g1: MatrixJson,
    pub g2: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecodersJson {
    pub slots: usize,
    pub v1_l: MatrixJson,
    pub v1_j: MatrixJson,
    pub v2_l: MatrixJson,
    pub v2_j: MatrixJson,
    pub u: MatrixJson,
    pub layout1: JamLayout,
    pub layout2: JamLayout,
    pub shared: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub config: AntennaConfig,
    pub seed: u64,
    pub tolerance: Tolerance,
    pub sum_sdof: Dof,
    pub regime: RegimeLabel,
    pub allocation: JammingAllocation,
    pub allocation_audit: AuditReport,
    pub channels: ChannelsJson,
    pub precoders: PrecodersJson,
    pub diagnostics: PrecoderDiagnostics,
    pub checks: Vec<AuditCheck>,
    pub passed: bool,
}

/// Outcome of re-evaluating a loaded report.
#[derive(Debug, Clone, PartialEq)]
pub struct Recheck {
    pub diagnostics: PrecoderDiagnostics,
    pub checks: Vec<AuditCheck>,
    pub passed: bool,
    /// Whether the fresh verdict equals the recorded one.
    pub agrees: bool,
}

/// Samples one channel realization for `seed` (static eavesdropper) and
/// designs the precoders for it.
pub fn design(config: &AntennaConfig, seed: u64, tol: Tolerance) -> Result<DesignReport> {
    config.validate()?;
    tol.validate()?;
    let alloc = allocate_jamming(config);
    let audit = audit_allocation(&alloc, config);
    if let Some(bad) = audit.failures().next() {
        return Err(Error::InfeasibleAllocation(format!(
            "{} violated: {}",
            bad.identity, bad.detail
        )));
    }
    let stream = RngStream::new(seed, 0, 0);
    let ch = sample_channels(
        config,
        stream,
        EveMode::StaticEve,
        &ChannelDistribution::default(),
    );
    let pre = build_precoders(config, &ch, &alloc, &mut stream.rng(Lane::Precoder), tol)?;
    let diagnostics = diagnose(&ch, &pre, tol)?;
    let checks = diagnostics.checks(config, &alloc);
    let passed = checks.iter().all(|c| c.passed);
    Ok(DesignReport {
        config: *config,
        seed,
        tolerance: tol,
        sum_sdof: sum_sdof(config),
        regime: classify(config),
        allocation: alloc,
        allocation_audit: audit,
        channels: ChannelsJson {
            h1: MatrixJson::encode(&ch.h1),
            h2: MatrixJson::encode(&ch.h2),
            g1: MatrixJson::encode(&ch.g1),
            g2: MatrixJson::encode(&ch.g2),
        },
        precoders: PrecodersJson {
            slots: pre.slots,
            v1_l: MatrixJson::encode(&pre.v1_l),
            v1_j: MatrixJson::encode(&pre.v1_j),
            v2_l: MatrixJson::encode(&pre.v2_l),
            v2_j: MatrixJson::encode(&pre.v2_j),
            u: MatrixJson::encode(&pre.u),
            layout1: pre.layout1,
            layout2: pre.layout2,
            shared: MatrixJson::encode(pre.shared.basis()),
        },
        diagnostics,
        checks,
        passed,
    })
}

impl DesignReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("design report always serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("design report: {e}")))
    }

    pub fn channels(&self) -> Result<ChannelRealization> {
        let c = &self.channels;
        Ok(ChannelRealization {
            h1: c.h1.decode()?,
            h2: c.h2.decode()?,
            g1: c.g1.decode()?,
            g2: c.g2.decode()?,
        })
    }

    pub fn precoders(&self) -> Result<PrecoderSet> {
        let p = &self.precoders;
        Ok(PrecoderSet {
            v1_l: p.v1_l.decode()?,
            v1_j: p.v1_j.decode()?,
            v2_l: p.v2_l.decode()?,
            v2_j: p.v2_j.decode()?,
            u: p.u.decode()?,
            slots: p.slots,
            layout1: p.layout1,
            layout2: p.layout2,
            shared: Subspace::from_orthonormal(p.shared.decode()?)?,
        })
    }

    /// Recomputes residuals, ranks and the verdict from the stored matrices.
    pub fn recheck(&self) -> Result<Recheck> {
        let ch = self.channels()?;
        let pre = self.precoders()?;
        if pre.slots != self.allocation.slots() {
            return Err(Error::DimensionMismatch(format!(
                "report uses {} slot(s) but its allocation needs {}",
                pre.slots,
                self.allocation.slots()
            )));
        }
        let diagnostics = diagnose(&ch, &pre, self.tolerance)?;
        let checks = diagnostics.checks(&self.config, &self.allocation);
        let passed =
            checks.iter().all(|c| c.passed) && audit_allocation(&self.allocation, &self.config).all_passed();
        Ok(Recheck {
            diagnostics,
            checks,
            passed,
            agrees: passed == self.passed,
        })
    }
}
