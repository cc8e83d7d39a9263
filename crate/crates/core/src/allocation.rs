//! Jamming dimension allocation and its exact audit.
//!
//! The allocator spends the eavesdropper budget `N_E` in order of receiver
//! cost:
//!
//! 1. nullspace jamming, free at the receiver, up to `[M_i - N]+` streams per
//!    transmitter (transmitter 1 first);
//! 2. aligned jamming, one receive dimension per pair of streams, up to the
//!    dimension of `col(H1) ∩ col(H2)`, which is
//!    `[min(M1,N) + min(M2,N) - N]+`; a pair count of `k/2` with `k` odd needs
//!    the two-slot extension;
//! 3. random jamming, one receive dimension per stream.
//!
//! This reproduces every case of the achievable scheme: nullspace only when
//! `N_E < [M1-N]+ + [M2-N]+`, aligned plus random for `M1 < N`, all three
//! methods when `M1 > N > M2` and `N_E >= M1 - N + 2 M2`, and so on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::theory::{sum_sdof, AntennaConfig, Dof};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum JammingMethod {
    Nullspace,
    Aligned,
    Random,
}

impl fmt::Display for JammingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JammingMethod::Nullspace => "NULLSPACE",
            JammingMethod::Aligned => "ALIGNED",
            JammingMethod::Random => "RANDOM",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transmitter {
    Tx1,
    Tx2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JammingBlock {
    pub method: JammingMethod,
    pub streams: Dof,
}

/// Per-transmitter jamming blocks plus the resulting receiver occupancy and
/// legitimate stream split. All counts are per channel use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JammingAllocation {
    pub tx1: Vec<JammingBlock>,
    pub tx2: Vec<JammingBlock>,
    /// Receive dimensions occupied by jamming.
    pub j_s: Dof,
    pub d1: Dof,
    pub d2: Dof,
    /// Set when the aligned pair count is a half-integer.
    pub needs_two_slot: bool,
}

impl JammingAllocation {
    pub fn blocks(&self, tx: Transmitter) -> &[JammingBlock] {
        match tx {
            Transmitter::Tx1 => &self.tx1,
            Transmitter::Tx2 => &self.tx2,
        }
    }

    /// Streams of one method on one transmitter.
    pub fn streams(&self, tx: Transmitter, method: JammingMethod) -> Dof {
        self.blocks(tx)
            .iter()
            .filter(|b| b.method == method)
            .map(|b| b.streams)
            .sum()
    }

    pub fn jamming_streams(&self, tx: Transmitter) -> Dof {
        self.blocks(tx).iter().map(|b| b.streams).sum()
    }

    /// Jamming streams over both transmitters; an aligned pair counts twice.
    pub fn total_jamming(&self) -> Dof {
        self.jamming_streams(Transmitter::Tx1) + self.jamming_streams(Transmitter::Tx2)
    }

    pub fn legit_streams(&self, tx: Transmitter) -> Dof {
        match tx {
            Transmitter::Tx1 => self.d1,
            Transmitter::Tx2 => self.d2,
        }
    }

    pub fn sum_streams(&self) -> Dof {
        self.d1 + self.d2
    }

    /// Channel uses per precoding block: 2 with the two-slot extension.
    pub fn slots(&self) -> usize {
        if self.needs_two_slot {
            2
        } else {
            1
        }
    }

    /// One-line description such as `tx1[NULLSPACE 3, ALIGNED 1] tx2[ALIGNED 1]`.
    pub fn summary(&self) -> String {
        let side = |blocks: &[JammingBlock]| {
            blocks
                .iter()
                .map(|b| format!("{} {}", b.method, b.streams))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "tx1[{}] tx2[{}] j_s={} d1={} d2={}{}",
            side(&self.tx1),
            side(&self.tx2),
            self.j_s,
            self.d1,
            self.d2,
            if self.needs_two_slot { " two-slot" } else { "" }
        )
    }

    fn swap_transmitters(self) -> Self {
        Self {
            tx1: self.tx2,
            tx2: self.tx1,
            d1: self.d2,
            d2: self.d1,
            ..self
        }
    }
}

/// Dimension of `Null(H_i)` for a generic `N x M_i` channel.
pub fn nullspace_capacity(m_i: usize, n: usize) -> usize {
    m_i.saturating_sub(n)
}

/// Dimension of `col(H1) ∩ col(H2)` for generic channels.
pub fn intersection_capacity(config: &AntennaConfig) -> usize {
    (config.m1.min(config.n) + config.m2.min(config.n)).saturating_sub(config.n)
}

/// Allocates jamming streams for `config`. The result refers to the caller's
/// transmitter labels even though the construction relabels internally.
pub fn allocate_jamming(config: &AntennaConfig) -> JammingAllocation {
    let (c, swapped) = config.ordered();
    let alloc = allocate_ordered(&c);
    if swapped {
        alloc.swap_transmitters()
    } else {
        alloc
    }
}

fn allocate_ordered(c: &AntennaConfig) -> JammingAllocation {
    let d_s = sum_sdof(c);
    let empty = |d1, d2| JammingAllocation {
        tx1: Vec::new(),
        tx2: Vec::new(),
        j_s: Dof::ZERO,
        d1,
        d2,
        needs_two_slot: false,
    };
    if c.n_e >= c.m() {
        return empty(Dof::ZERO, Dof::ZERO);
    }

    let null1 = c.n_e.min(nullspace_capacity(c.m1, c.n));
    let null2 = (c.n_e - null1).min(nullspace_capacity(c.m2, c.n));
    let rest = c.n_e - null1 - null2;
    // aligned streams per transmitter, in half units
    let aligned_halves = rest.min(2 * intersection_capacity(c));
    let aligned = Dof::from_halves(aligned_halves as i64);
    let random = rest - aligned_halves;

    // A half-integer aligned count leaves no budget for random jamming, so
    // the per-transmitter room below is integral whenever `random > 0`.
    let room1 = (Dof::from(c.m1) - Dof::from(null1) - aligned).floor().max(0) as usize;
    let random1 = random.min(room1);
    let random2 = random - random1;

    let mut tx1 = Vec::new();
    let mut tx2 = Vec::new();
    let push = |v: &mut Vec<JammingBlock>, method, streams: Dof| {
        if streams > Dof::ZERO {
            v.push(JammingBlock { method, streams });
        }
    };
    push(&mut tx1, JammingMethod::Nullspace, Dof::from(null1));
    push(&mut tx1, JammingMethod::Aligned, aligned);
    push(&mut tx1, JammingMethod::Random, Dof::from(random1));
    push(&mut tx2, JammingMethod::Nullspace, Dof::from(null2));
    push(&mut tx2, JammingMethod::Aligned, aligned);
    push(&mut tx2, JammingMethod::Random, Dof::from(random2));

    let jam1: Dof = tx1.iter().map(|b| b.streams).sum();
    let d1 = (Dof::from(c.m1) - jam1).min(d_s).clamp_zero();
    let d2 = d_s - d1;

    JammingAllocation {
        tx1,
        tx2,
        j_s: aligned + Dof::from(random),
        d1,
        d2,
        needs_two_slot: !aligned.is_integer(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub identity: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: AntennaConfig,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_STREAM_BUDGET: &str = "stream_budget";
pub const CHECK_RECEIVER_ROOM: &str = "receiver_room";
pub const CHECK_SUM_SDOF: &str = "sum_sdof";
pub const CHECK_ANTENNA_BUDGET: &str = "antenna_budget";
pub const CHECK_REALIZABLE: &str = "realizable";

/// Verifies an allocation in exact arithmetic:
///
/// * `stream_budget`: jamming streams total `N_E` (zero in the zero regime);
/// * `receiver_room`: `N - J_s >= d1 + d2`;
/// * `sum_sdof`: `d1 + d2` equals the closed-form value;
/// * `antenna_budget`: jamming plus legitimate streams fit each transmitter;
/// * `realizable`: nullspace and aligned counts fit the generic subspace
///   dimensions, `J_s` equals aligned plus random streams, and fractional
///   counts only appear with the two-slot flag.
pub fn audit_allocation(alloc: &JammingAllocation, config: &AntennaConfig) -> AuditReport {
    use JammingMethod::*;
    use Transmitter::*;

    let mut checks = Vec::new();
    let mut add = |name: &str, identity: String, passed: bool, detail: String| {
        checks.push(AuditCheck {
            name: name.to_string(),
            identity,
            passed,
            detail,
        })
    };

    let d_s = sum_sdof(config);
    let budget = if config.n_e >= config.m() {
        Dof::ZERO
    } else {
        Dof::from(config.n_e)
    };
    let total = alloc.total_jamming();
    add(
        CHECK_STREAM_BUDGET,
        "J_tx1 + J_tx2 = N_E".into(),
        total == budget,
        format!("jamming streams {total}, budget {budget}"),
    );

    let room = Dof::from(config.n) - alloc.j_s;
    add(
        CHECK_RECEIVER_ROOM,
        "N - J_s >= d1 + d2".into(),
        room >= alloc.sum_streams(),
        format!("N - J_s = {room}, d1 + d2 = {}", alloc.sum_streams()),
    );

    add(
        CHECK_SUM_SDOF,
        "d1 + d2 = D_s".into(),
        alloc.sum_streams() == d_s,
        format!("d1 + d2 = {}, D_s = {d_s}", alloc.sum_streams()),
    );

    let fits = |tx, m: usize| {
        let used = alloc.jamming_streams(tx) + alloc.legit_streams(tx);
        (used <= Dof::from(m) && alloc.legit_streams(tx) >= Dof::ZERO, used)
    };
    let (ok1, used1) = fits(Tx1, config.m1);
    let (ok2, used2) = fits(Tx2, config.m2);
    add(
        CHECK_ANTENNA_BUDGET,
        "J_i + d_i <= M_i".into(),
        ok1 && ok2,
        format!(
            "tx1 uses {used1} of {}, tx2 uses {used2} of {}",
            config.m1, config.m2
        ),
    );

    let null_ok = alloc.streams(Tx1, Nullspace) <= Dof::from(nullspace_capacity(config.m1, config.n))
        && alloc.streams(Tx2, Nullspace) <= Dof::from(nullspace_capacity(config.m2, config.n));
    let aligned = alloc.streams(Tx1, Aligned);
    let aligned_ok =
        aligned == alloc.streams(Tx2, Aligned) && aligned <= Dof::from(intersection_capacity(config));
    let occupancy = aligned + alloc.streams(Tx1, Random) + alloc.streams(Tx2, Random);
    let integral = alloc.needs_two_slot
        || alloc
            .tx1
            .iter()
            .chain(&alloc.tx2)
            .map(|b| b.streams)
            .chain([alloc.d1, alloc.d2, alloc.j_s])
            .all(Dof::is_integer);
    add(
        CHECK_REALIZABLE,
        "nullspace <= [M_i-N]+, aligned <= dim(col H1 ∩ col H2), J_s = aligned + random".into(),
        null_ok && aligned_ok && occupancy == alloc.j_s && integral,
        format!(
            "nullspace ok: {null_ok}, aligned ok: {aligned_ok}, occupancy {occupancy} vs J_s {}, integral: {integral}",
            alloc.j_s
        ),
    );

    AuditReport {
        config: *config,
        checks,
    }
}
