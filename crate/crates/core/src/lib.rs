//! Secure degrees of freedom of the two-transmitter Gaussian MIMO multiple
//! access wiretap channel: closed-form evaluation, jamming allocation,
//! precoder synthesis with zero-forcing reception, and Monte Carlo slope
//! estimation.

pub mod allocation;
pub mod channel;
pub mod design;
pub mod error;
pub mod json;
pub mod precoder;
pub mod run_config;
pub mod sim;
pub mod subspace;
pub mod theory;
pub mod verify;

pub use allocation::{
    allocate_jamming, audit_allocation, AuditCheck, AuditReport, JammingAllocation, JammingBlock,
    JammingMethod, Transmitter,
};
pub use channel::{
    sample_channels, ChannelDistribution, ChannelRealization, EveMode, Lane, RngStream, SignalParams,
};
pub use design::{design, DesignReport};
pub use error::{Error, Result};
pub use precoder::{build_precoders, diagnose, leakage_rank, PrecoderDiagnostics, PrecoderSet};
pub use run_config::RunConfig;
pub use sim::{estimate_dof, sweep, DofEstimate, RateSample, SweepConfig};
pub use subspace::{CMatrix, Subspace, Tolerance, C64};
pub use theory::{classify, regime_table, sum_sdof, upper_bounds, AntennaConfig, Dof, Regime, RegimeLabel};
pub use verify::{run_verify, VerifyOptions, VerifyReport};
