//! Jamming and legitimate precoders plus the zero-forcing post-processor.
//!
//! Each transmitter's precoder is `[V_L | V_J]` with orthonormal columns, and
//! its jamming part is laid out as `[nullspace | aligned | random]`. The
//! receiver applies the orthogonal projector `U` onto the complement of the
//! received jamming columns.
//!
//! Allocations with a half-integer aligned count are realized over the
//! in-phase/quadrature extension: each complex channel `A` acts on stacked
//! real and imaginary parts through its real-composite form, doubling every
//! dimension, and all precoders are real. Aligned vectors in the
//! intersection of the real-composite column spaces occupy one real receive
//! dimension per pair, while the eavesdropper still sees the two members of a
//! pair along different directions because its real-composite channels
//! rotate them differently. Rates and ranks in this domain are reported per
//! complex channel use, i.e. divided by two.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::allocation::{AuditCheck, JammingAllocation, JammingMethod, Transmitter};
use crate::channel::{check_compatible, ChannelRealization};
use crate::error::{Error, Result};
use crate::subspace::{
    complement_projector, complete_orthonormal, intersect, max_abs, nullspace, orthonormal_basis,
    orthonormality_residual, rank, solve_into, CMatrix, Subspace, Tolerance, C64, ORTHONORMAL_TOL,
};
use crate::theory::{AntennaConfig, Dof};

/// Column counts of the jamming blocks of one transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct JamLayout {
    pub nullspace: usize,
    pub aligned: usize,
    pub random: usize,
}

impl JamLayout {
    pub fn total(&self) -> usize {
        self.nullspace + self.aligned + self.random
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    pub v1_l: CMatrix,
    pub v1_j: CMatrix,
    pub v2_l: CMatrix,
    pub v2_j: CMatrix,
    /// Zero-forcing projector at the legitimate receiver.
    pub u: CMatrix,
    /// 1, or 2 for the I/Q extension.
    pub slots: usize,
    pub layout1: JamLayout,
    pub layout2: JamLayout,
    /// Receive subspace shared by the aligned jamming of both transmitters.
    pub shared: Subspace,
}

impl PrecoderSet {
    /// Stacked `[V_L | V_J]` of one transmitter.
    pub fn full_precoder(&self, tx: Transmitter) -> CMatrix {
        let (l, j) = match tx {
            Transmitter::Tx1 => (&self.v1_l, &self.v1_j),
            Transmitter::Tx2 => (&self.v2_l, &self.v2_j),
        };
        hstack(&[l, j], l.nrows())
    }
}

/// `streams` Haar-distributed orthonormal columns in `C^m`.
pub fn random_jamming(m: usize, streams: usize, rng: &mut impl Rng) -> Result<CMatrix> {
    if streams > m {
        return Err(Error::DimensionMismatch(format!(
            "cannot draw {streams} orthonormal columns in dimension {m}"
        )));
    }
    haar_columns(m, streams, false, rng)
}

/// Orthonormal jamming columns inside `Null(h)`.
pub fn nullspace_jamming(h: &CMatrix, streams: usize, tol: Tolerance) -> Result<CMatrix> {
    if streams == 0 {
        return Ok(CMatrix::zeros(h.ncols(), 0));
    }
    let ns = nullspace(h, tol)?;
    if ns.dim() < streams {
        return Err(Error::InfeasibleAllocation(format!(
            "nullspace jamming needs {streams} streams but dim Null(H) = {}",
            ns.dim()
        )));
    }
    Ok(ns.truncate(streams).into_basis())
}

/// Jamming precoders for both transmitters whose received images span the
/// same `streams`-dimensional subspace of `col(h1) ∩ col(h2)`.
///
/// Each precoder is the minimum-norm solution of `h_i V = I_basis`,
/// orthonormalized afterwards; orthonormalization mixes the columns but keeps
/// the received span.
pub fn aligned_jamming(
    h1: &CMatrix,
    h2: &CMatrix,
    streams: usize,
    tol: Tolerance,
) -> Result<(CMatrix, CMatrix, Subspace)> {
    if h1.nrows() != h2.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "receivers differ: {} vs {} rows",
            h1.nrows(),
            h2.nrows()
        )));
    }
    if streams == 0 {
        return Ok((
            CMatrix::zeros(h1.ncols(), 0),
            CMatrix::zeros(h2.ncols(), 0),
            Subspace::zero(h1.nrows()),
        ));
    }
    let a1 = orthonormal_basis(h1, tol)?;
    let a2 = orthonormal_basis(h2, tol)?;
    let common = intersect(&a1, &a2, tol)?;
    if common.dim() < streams {
        return Err(Error::InfeasibleAllocation(format!(
            "aligned jamming needs {streams} streams but dim(col H1 ∩ col H2) = {}",
            common.dim()
        )));
    }
    let shared = common.truncate(streams);
    let solve = |h: &CMatrix| -> Result<CMatrix> {
        let v = solve_into(h, shared.basis(), tol)?;
        let o = orthonormal_basis(&v, tol)?;
        if o.dim() != streams {
            return Err(Error::NumericalFailure(format!(
                "aligned precoder lost rank: {} of {streams}",
                o.dim()
            )));
        }
        Ok(o.into_basis())
    };
    Ok((solve(h1)?, solve(h2)?, shared))
}

/// Builds every precoder for one channel realization.
pub fn build_precoders(
    config: &AntennaConfig,
    ch: &ChannelRealization,
    alloc: &JammingAllocation,
    rng: &mut impl Rng,
    tol: Tolerance,
) -> Result<PrecoderSet> {
    use JammingMethod::*;
    use Transmitter::*;

    let slots = alloc.slots();
    let real = slots == 2;
    let ext = ch.extended(slots);
    if ext.h1.shape() != (slots * config.n, slots * config.m1)
        || ext.h2.shape() != (slots * config.n, slots * config.m2)
    {
        return Err(Error::DimensionMismatch(format!(
            "channel shapes {:?}/{:?} do not match config {config}",
            ch.h1.shape(),
            ch.h2.shape()
        )));
    }
    let count = |d: Dof| {
        d.scaled_count(slots).ok_or_else(|| {
            Error::InfeasibleAllocation(format!("{d} streams cannot be realized over {slots} slot(s)"))
        })
    };
    let layout = |tx| -> Result<JamLayout> {
        Ok(JamLayout {
            nullspace: count(alloc.streams(tx, Nullspace))?,
            aligned: count(alloc.streams(tx, Aligned))?,
            random: count(alloc.streams(tx, Random))?,
        })
    };
    let (layout1, layout2) = (layout(Tx1)?, layout(Tx2)?);
    if layout1.aligned != layout2.aligned {
        return Err(Error::InfeasibleAllocation(
            "aligned jamming needs equal stream counts on both transmitters".into(),
        ));
    }

    let (a1, a2, shared) = aligned_jamming(&ext.h1, &ext.h2, layout1.aligned, tol)?;

    let mut jam = |h: &CMatrix, lay: &JamLayout, aligned: CMatrix| -> Result<CMatrix> {
        let m = h.ncols();
        let null = nullspace_jamming(h, lay.nullspace, tol)?;
        // The aligned block is a minimum-norm solution, hence already
        // orthogonal to Null(h); Gram-Schmidt only removes roundoff and
        // leaves h * aligned unchanged.
        let fixed = orthonormalize(&hstack(&[&null, &aligned], m))?;
        if lay.random == 0 {
            return Ok(fixed);
        }
        let room = m - fixed.ncols();
        if lay.random > room {
            return Err(Error::InfeasibleAllocation(format!(
                "{} random streams exceed the {room} remaining antenna dimensions",
                lay.random
            )));
        }
        let comp = complete_orthonormal(&Subspace::from_orthonormal(fixed.clone())?, room)?;
        let random = &comp * haar_columns(room, lay.random, real, rng)?;
        Ok(hstack(&[&fixed, &random], m))
    };
    let v1_j = jam(&ext.h1, &layout1, a1)?;
    let v2_j = jam(&ext.h2, &layout2, a2)?;

    let mut legit = |v_j: &CMatrix, d: Dof| -> Result<CMatrix> {
        let d = count(d)?;
        let m = v_j.nrows();
        let room = m - v_j.ncols();
        if d > room {
            return Err(Error::InfeasibleAllocation(format!(
                "{d} legitimate streams exceed the {room} free antenna dimensions"
            )));
        }
        let comp = complete_orthonormal(&Subspace::from_orthonormal(v_j.clone())?, room)?;
        Ok(&comp * haar_columns(room, d, real, rng)?)
    };
    let v1_l = legit(&v1_j, alloc.d1)?;
    let v2_l = legit(&v2_j, alloc.d2)?;

    let received_jam = hstack(&[&(&ext.h1 * &v1_j), &(&ext.h2 * &v2_j)], ext.h1.nrows());
    let u = complement_projector(&received_jam, tol)?;

    Ok(PrecoderSet {
        v1_l,
        v1_j,
        v2_l,
        v2_j,
        u,
        slots,
        layout1,
        layout2,
        shared,
    })
}

/// Rank of the jamming as received by the eavesdropper, per channel use.
pub fn leakage_rank(ch: &ChannelRealization, pre: &PrecoderSet, tol: Tolerance) -> Result<Dof> {
    let ext = ch.extended(pre.slots);
    check_compatible(&ext, pre)?;
    let eve_jam = hstack(&[&(&ext.g1 * &pre.v1_j), &(&ext.g2 * &pre.v2_j)], ext.g1.nrows());
    Ok(per_use(rank(&eve_jam, tol)?, pre.slots))
}

/// Residuals and ranks of a precoder set against its channel realization.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PrecoderDiagnostics {
    pub slots: usize,
    /// `max |H_i V_i^null|`.
    #[serde(with = "crate::json::f64_string")]
    pub nullspace_residual: f64,
    /// Largest distance of `H_i V_i^aligned` from the shared receive subspace,
    /// over both transmitters.
    #[serde(with = "crate::json::f64_string")]
    pub alignment_residual: f64,
    /// `max |V_i^H V_i - I|` for the stacked `[V_L | V_J]`.
    #[serde(with = "crate::json::f64_string")]
    pub unitarity_residual: f64,
    /// `max |U H_i V_i^J|`.
    #[serde(with = "crate::json::f64_string")]
    pub zero_forcing_residual: f64,
    /// `max |U U - U|`.
    #[serde(with = "crate::json::f64_string")]
    pub idempotence_residual: f64,
    /// `max |U - U^H|`.
    #[serde(with = "crate::json::f64_string")]
    pub hermitian_residual: f64,
    /// Rank of `U`, per channel use.
    pub u_rank: Dof,
    /// Rank of `U [H1 V1_L | H2 V2_L]`, per channel use.
    pub legit_rank: Dof,
    /// Rank of `[G1 V1_J | G2 V2_J]`, per channel use.
    pub leakage_rank: Dof,
}

pub fn diagnose(ch: &ChannelRealization, pre: &PrecoderSet, tol: Tolerance) -> Result<PrecoderDiagnostics> {
    let ext = ch.extended(pre.slots);
    check_compatible(&ext, pre)?;

    let null_res = |h: &CMatrix, v: &CMatrix, lay: &JamLayout| max_abs(&(h * v.columns(0, lay.nullspace)));
    let align_res = |h: &CMatrix, v: &CMatrix, lay: &JamLayout| {
        let received = h * v.columns(lay.nullspace, lay.aligned);
        if lay.aligned == 0 {
            0.0
        } else if pre.shared.dim() != lay.aligned {
            f64::INFINITY
        } else {
            pre.shared.projection_residual(&received)
        }
    };

    let rows = ext.h1.nrows();
    let legit = hstack(&[&(&ext.h1 * &pre.v1_l), &(&ext.h2 * &pre.v2_l)], rows);
    let jam = hstack(&[&(&ext.h1 * &pre.v1_j), &(&ext.h2 * &pre.v2_j)], rows);

    Ok(PrecoderDiagnostics {
        slots: pre.slots,
        nullspace_residual: null_res(&ext.h1, &pre.v1_j, &pre.layout1).max(null_res(
            &ext.h2,
            &pre.v2_j,
            &pre.layout2,
        )),
        alignment_residual: align_res(&ext.h1, &pre.v1_j, &pre.layout1).max(align_res(
            &ext.h2,
            &pre.v2_j,
            &pre.layout2,
        )),
        unitarity_residual: orthonormality_residual(&pre.full_precoder(Transmitter::Tx1))
            .max(orthonormality_residual(&pre.full_precoder(Transmitter::Tx2))),
        zero_forcing_residual: max_abs(&(&pre.u * &jam)),
        idempotence_residual: max_abs(&(&pre.u * &pre.u - &pre.u)),
        hermitian_residual: max_abs(&(&pre.u - pre.u.adjoint())),
        u_rank: per_use(rank(&pre.u, tol)?, pre.slots),
        legit_rank: per_use(rank(&(&pre.u * legit), tol)?, pre.slots),
        leakage_rank: leakage_rank(ch, pre, tol)?,
    })
}

pub const NULLSPACE_TOL: f64 = 1e-9;
pub const ALIGNMENT_TOL: f64 = 1e-8;
pub const UNITARITY_TOL: f64 = 1e-9;
pub const ZERO_FORCING_TOL: f64 = 1e-8;
pub const IDEMPOTENCE_TOL: f64 = 1e-9;
pub const HERMITIAN_TOL: f64 = 1e-12;

impl PrecoderDiagnostics {
    /// Residual thresholds and the rank identities expected for `alloc`:
    /// `rank U = N - J_s`, decoded rank `d1 + d2`, eavesdropper jamming rank
    /// `min(N_E, jamming streams)`.
    pub fn checks(&self, config: &AntennaConfig, alloc: &JammingAllocation) -> Vec<AuditCheck> {
        let residual = |name: &str, value: f64, limit: f64| AuditCheck {
            name: name.to_string(),
            identity: format!("{name} <= {limit:e}"),
            passed: value <= limit,
            detail: format!("{value:e}"),
        };
        let ranked = |name: &str, identity: &str, got: Dof, want: Dof| AuditCheck {
            name: name.to_string(),
            identity: identity.to_string(),
            passed: got == want,
            detail: format!("rank {got}, expected {want}"),
        };
        let eve_want = Dof::from(config.n_e).min(alloc.total_jamming());
        vec![
            residual("nullspace_residual", self.nullspace_residual, NULLSPACE_TOL),
            residual("alignment_residual", self.alignment_residual, ALIGNMENT_TOL),
            residual("unitarity_residual", self.unitarity_residual, UNITARITY_TOL),
            residual(
                "zero_forcing_residual",
                self.zero_forcing_residual,
                ZERO_FORCING_TOL,
            ),
            residual("idempotence_residual", self.idempotence_residual, IDEMPOTENCE_TOL),
            residual("hermitian_residual", self.hermitian_residual, HERMITIAN_TOL),
            ranked(
                "u_rank",
                "rank U = N - J_s",
                self.u_rank,
                Dof::from(config.n) - alloc.j_s,
            ),
            ranked(
                "legit_rank",
                "rank U [H1 V1_L | H2 V2_L] = d1 + d2",
                self.legit_rank,
                alloc.sum_streams(),
            ),
            ranked(
                "leakage_rank",
                "rank [G1 V1_J | G2 V2_J] = min(N_E, J)",
                self.leakage_rank,
                eve_want,
            ),
        ]
    }
}

fn per_use(rank: usize, slots: usize) -> Dof {
    Dof::from_halves((2 * rank / slots) as i64)
}

pub(crate) fn hstack(blocks: &[&CMatrix], rows: usize) -> CMatrix {
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Column order and
/// the span of every leading block are preserved.
fn orthonormalize(m: &CMatrix) -> Result<CMatrix> {
    let mut q = m.clone();
    for j in 0..q.ncols() {
        for _ in 0..2 {
            for i in 0..j {
                let qi = q.column(i).clone_owned();
                let proj = qi.dotc(&q.column(j));
                q.column_mut(j).axpy(-proj, &qi, C64::from(1.0));
            }
        }
        let norm = q.column(j).norm();
        if norm < ORTHONORMAL_TOL {
            return Err(Error::NumericalFailure(format!(
                "column {j} is linearly dependent on its predecessors"
            )));
        }
        q.column_mut(j).unscale_mut(norm);
    }
    Ok(q)
}

/// `k` orthonormal columns in dimension `m`, Haar-distributed over the real
/// or complex Stiefel manifold. Gram-Schmidt of a Gaussian matrix yields the
/// Haar measure exactly.
fn haar_columns(m: usize, k: usize, real: bool, rng: &mut impl Rng) -> Result<CMatrix> {
    let g = CMatrix::from_fn(m, k, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        if real {
            C64::from(re)
        } else {
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        }
    });
    orthonormalize(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::allocate_jamming;
    use crate::channel::{sample_channels, EveMode, Lane, RngStream};
    use crate::subspace::is_real;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn cfg(m1: usize, m2: usize, n: usize, n_e: usize) -> AntennaConfig {
        AntennaConfig::new(m1, m2, n, n_e).unwrap()
    }

    fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
        crate::channel::ChannelDistribution::default().sample_matrix(rows, cols, rng)
    }

    fn build(c: AntennaConfig, seed: u64) -> (ChannelRealization, PrecoderSet) {
        let s = RngStream::new(seed, 0, 0);
        let ch = sample_channels(&c, s, EveMode::StaticEve, &Default::default());
        let alloc = allocate_jamming(&c);
        let pre = build_precoders(&c, &ch, &alloc, &mut s.rng(Lane::Precoder), tol()).unwrap();
        (ch, pre)
    }

    #[test]
    fn random_jamming_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_jamming(3, 0, &mut rng).unwrap().shape(), (3, 0));
        let v = random_jamming(4, 2, &mut rng).unwrap();
        assert_eq!(v.shape(), (4, 2));
        assert!(orthonormality_residual(&v) <= 1e-10);
        assert!(matches!(
            random_jamming(2, 3, &mut rng),
            Err(Error::DimensionMismatch(_))
        ));
    }

    /// |<v, e1>|^2 of a Haar unit vector in C^m is Beta(1, m-1):
    /// F(x) = 1 - (1 - x)^(m-1). One-sample Kolmogorov-Smirnov test.
    #[test]
    fn random_jamming_direction_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let m = 4;
        let samples = 4000;
        let mut xs: Vec<f64> = (0..samples)
            .map(|_| random_jamming(m, 1, &mut rng).unwrap()[(0, 0)].norm_sqr())
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cdf = |x: f64| 1.0 - (1.0 - x).powi(m as i32 - 1);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / samples as f64)
                    .abs()
                    .max(((i + 1) as f64 / samples as f64 - f).abs())
            })
            .fold(0.0, f64::max);
        // critical value at the 1% level: 1.63 / sqrt(n)
        assert!(d < 1.63 / (samples as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn nullspace_jamming_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sq = gaussian(3, 3, &mut rng);
        assert!(matches!(
            nullspace_jamming(&sq, 1, tol()),
            Err(Error::InfeasibleAllocation(_))
        ));
        let h = gaussian(2, 5, &mut rng);
        let v = nullspace_jamming(&h, 3, tol()).unwrap();
        assert!(max_abs(&(&h * &v)) <= 1e-9);
        assert!(orthonormality_residual(&v) <= 1e-10);
        assert_eq!(nullspace_jamming(&h, 0, tol()).unwrap().shape(), (5, 0));
    }

    #[test]
    fn aligned_jamming_examples() {
        let id = CMatrix::identity(3, 3);
        let (v1, v2, shared) = aligned_jamming(&id, &id, 2, tol()).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(shared.dim(), 2);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let h1 = gaussian(3, 2, &mut rng);
            let h2 = gaussian(3, 2, &mut rng);
            let (v1, v2, shared) = aligned_jamming(&h1, &h2, 1, tol()).unwrap();
            // single stream: the received vectors are parallel
            let r1 = &h1 * &v1;
            let r2 = &h2 * &v2;
            assert!(shared.projection_residual(&r1) <= 1e-8);
            assert!(shared.projection_residual(&r2) <= 1e-8);
            let scale = r2.column(0).dotc(&r1.column(0)) / r2.column(0).norm_squared();
            assert!(max_abs(&(&r1 - &r2 * scale)) <= 1e-8);
        }

        let h1 = gaussian(4, 2, &mut rng);
        let h2 = gaussian(4, 1, &mut rng);
        assert!(matches!(
            aligned_jamming(&h1, &h2, 1, tol()),
            Err(Error::InfeasibleAllocation(_))
        ));
    }

    #[test]
    fn receiver_rich_case_ranks() {
        let (ch, pre) = build(cfg(2, 2, 4, 1), 10);
        let d = diagnose(&ch, &pre, tol()).unwrap();
        assert_eq!(d.u_rank, Dof::from_int(3));
        assert_eq!(d.legit_rank, Dof::from_int(3));
        assert_eq!(d.leakage_rank, Dof::from_int(1));
    }

    #[test]
    fn nullspace_case_leaves_receiver_untouched() {
        let (ch, pre) = build(cfg(4, 1, 2, 1), 1);
        assert!(max_abs(&(&pre.u - CMatrix::identity(2, 2))) < 1e-9);
        assert!(max_abs(&(&ch.h1 * &pre.v1_j)) <= 1e-9);
        let d = diagnose(&ch, &pre, tol()).unwrap();
        assert_eq!(d.legit_rank, Dof::from_int(2));
    }

    #[test]
    fn aligned_case_ranks() {
        let (ch, pre) = build(cfg(2, 2, 3, 2), 7);
        let d = diagnose(&ch, &pre, tol()).unwrap();
        assert_eq!(d.u_rank, Dof::from_int(2));
        assert_eq!(d.legit_rank, Dof::from_int(2));
        // aligned at the receiver but not at the eavesdropper
        assert_eq!(d.leakage_rank, Dof::from_int(2));
        assert!(d.alignment_residual <= 1e-8);
    }

    #[test]
    fn full_three_method_allocation() {
        let (ch, pre) = build(cfg(5, 1, 2, 5), 3);
        let d = diagnose(&ch, &pre, tol()).unwrap();
        assert_eq!(d.leakage_rank, Dof::from_int(5));
        assert_eq!(d.u_rank, Dof::from_int(1));
        assert_eq!(d.legit_rank, Dof::from_int(1));
        assert!(d.nullspace_residual <= 1e-9);
    }

    #[test]
    fn two_slot_extension_is_real_and_fractional() {
        let (ch, pre) = build(cfg(2, 2, 3, 1), 5);
        assert_eq!(pre.slots, 2);
        for m in [&pre.v1_l, &pre.v1_j, &pre.v2_l, &pre.v2_j, &pre.u] {
            assert!(is_real(m));
        }
        let d = diagnose(&ch, &pre, tol()).unwrap();
        assert_eq!(d.u_rank, Dof::half_of(5));
        assert_eq!(d.legit_rank, Dof::half_of(5));
        assert_eq!(d.leakage_rank, Dof::from_int(1));
        assert!(d.alignment_residual <= 1e-8);
    }

    #[test]
    fn no_jamming_gives_zero_leakage_rank() {
        let (ch, pre) = build(cfg(2, 2, 3, 0), 5);
        assert_eq!(leakage_rank(&ch, &pre, tol()).unwrap(), Dof::ZERO);
        assert_eq!(pre.u, CMatrix::identity(3, 3));
    }
}
