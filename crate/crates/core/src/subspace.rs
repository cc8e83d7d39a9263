//! Complex subspace algebra.
//!
//! Every precoder construction reduces to a handful of operations on column
//! spaces: orthonormal bases, nullspaces, intersections, minimum-norm solves
//! and orthogonal-complement projectors. All of them are built on a single
//! singular value decomposition helper with one rank rule: a singular value
//! counts as nonzero when it exceeds both `rank_rel_tol * sigma_max` and the
//! absolute floor `residual_abs_tol`. The absolute floor assumes O(1) entries,
//! which holds for unit-variance channels and orthonormal precoders; it is what
//! makes a numerically-zero product such as `H * Null(H)` report rank 0.
//!
//! Real-valued inputs (every imaginary part exactly zero) are decomposed in
//! real arithmetic, so their bases, nullspaces and solutions stay real. The
//! I/Q extension in [`crate::precoder`] depends on this.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;

/// Dense complex matrix. Zero-column matrices are legal and stand for empty
/// precoders.
pub type CMatrix = DMatrix<C64>;

/// Orthonormality threshold for [`Subspace`] bases.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Rank and residual thresholds.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    /// Relative singular-value cutoff.
    pub rank_rel_tol: f64,
    /// Absolute residual threshold; also the absolute singular-value floor.
    pub residual_abs_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-10,
            residual_abs_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel_tol: f64, residual_abs_tol: f64) -> Result<Self> {
        let tol = Self {
            rank_rel_tol,
            residual_abs_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rank_rel_tol > 0.0
            && self.rank_rel_tol < 1.0
            && self.residual_abs_tol > 0.0
            && self.residual_abs_tol.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "tolerances must satisfy 0 < rank_rel_tol < 1 and residual_abs_tol > 0, got {self:?}"
            )))
        }
    }

    fn cutoff(&self, sigma_max: f64) -> f64 {
        (self.rank_rel_tol * sigma_max).max(self.residual_abs_tol)
    }
}

/// A subspace of `C^ambient_dim` held as an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Wraps a basis after checking that its columns are orthonormal.
    pub fn from_orthonormal(basis: CMatrix) -> Result<Self> {
        check_finite(&basis)?;
        let res = orthonormality_residual(&basis);
        if res > ORTHONORMAL_TOL {
            return Err(Error::InvalidMatrix(format!(
                "basis columns are not orthonormal (residual {res:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> CMatrix {
        self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Largest entry of `m - P m`, where `P` projects onto this subspace.
    pub fn projection_residual(&self, m: &CMatrix) -> f64 {
        let coeffs = self.basis.adjoint() * m;
        max_abs(&(m - &self.basis * coeffs))
    }

    /// The first `k` basis columns.
    pub fn truncate(&self, k: usize) -> Subspace {
        let k = k.min(self.dim());
        Subspace {
            basis: self.basis.columns(0, k).into_owned(),
        }
    }
}

/// Orthonormal basis of the column space of `a`.
pub fn orthonormal_basis(a: &CMatrix, tol: Tolerance) -> Result<Subspace> {
    check_finite(a)?;
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Subspace::zero(a.nrows()));
    }
    let svd = decompose(a, false)?;
    let r = numerical_rank(&svd.singular, tol);
    Ok(Subspace {
        basis: svd.u.columns(0, r).into_owned(),
    })
}

/// Orthonormal basis of `{v : a v = 0}`; its ambient dimension is `cols(a)`.
pub fn nullspace(a: &CMatrix, tol: Tolerance) -> Result<Subspace> {
    check_finite(a)?;
    let n = a.ncols();
    if a.nrows() == 0 || n == 0 {
        return Ok(Subspace::full(n));
    }
    let svd = decompose(a, true)?;
    let r = numerical_rank(&svd.singular, tol);
    Ok(Subspace {
        basis: svd.v.columns(r, n - r).into_owned(),
    })
}

/// Numerical rank of `a`.
pub fn rank(a: &CMatrix, tol: Tolerance) -> Result<usize> {
    check_finite(a)?;
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0);
    }
    let svd = decompose(a, false)?;
    Ok(numerical_rank(&svd.singular, tol))
}

/// Singular values of `a` in descending order.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    check_finite(a)?;
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    Ok(decompose(a, false)?.singular)
}

/// Intersection of two subspaces, computed from the nullspace of
/// `[a.basis | -b.basis]`.
pub fn intersect(a: &Subspace, b: &Subspace, tol: Tolerance) -> Result<Subspace> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot intersect subspaces of C^{} and C^{}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(Subspace::zero(a.ambient_dim()));
    }
    let mut stacked = CMatrix::zeros(a.ambient_dim(), a.dim() + b.dim());
    stacked.columns_mut(0, a.dim()).copy_from(a.basis());
    stacked.columns_mut(a.dim(), b.dim()).copy_from(&(-b.basis()));
    let coeffs = nullspace(&stacked, tol)?;
    if coeffs.dim() == 0 {
        return Ok(Subspace::zero(a.ambient_dim()));
    }
    let vectors = a.basis() * coeffs.basis().rows(0, a.dim());
    orthonormal_basis(&vectors, tol)
}

/// Minimum-norm `V` with `h V = target`.
///
/// Fails with [`Error::Unsolvable`] when `target` leaves the column space of
/// `h` by more than `residual_abs_tol`.
pub fn solve_into(h: &CMatrix, target: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    check_finite(h)?;
    check_finite(target)?;
    if h.nrows() != target.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "system has {} rows but target has {}",
            h.nrows(),
            target.nrows()
        )));
    }
    let mut v = CMatrix::zeros(h.ncols(), target.ncols());
    if target.ncols() == 0 {
        return Ok(v);
    }
    if h.nrows() > 0 && h.ncols() > 0 {
        let svd = decompose(h, false)?;
        let r = numerical_rank(&svd.singular, tol);
        for k in 0..r {
            let coeff = svd.u.column(k).adjoint() * target / C64::from(svd.singular[k]);
            v += svd.v.column(k) * coeff;
        }
    }
    let residual = max_abs(&(h * &v - target));
    if residual > tol.residual_abs_tol {
        return Err(Error::Unsolvable {
            residual,
            tolerance: tol.residual_abs_tol,
        });
    }
    Ok(v)
}

/// Orthogonal projector onto the complement of `col(cols)`.
pub fn complement_projector(cols: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    let basis = orthonormal_basis(cols, tol)?;
    let n = cols.nrows();
    let u = CMatrix::identity(n, n) - basis.projector();
    Ok(hermitian_part(&u))
}

/// `extra` orthonormal columns orthogonal to `partial`.
pub fn complete_orthonormal(partial: &Subspace, extra: usize) -> Result<CMatrix> {
    let n = partial.ambient_dim();
    if partial.dim() + extra > n {
        return Err(Error::DimensionMismatch(format!(
            "cannot add {extra} columns to a {}-dimensional subspace of C^{n}",
            partial.dim()
        )));
    }
    let complement = nullspace(&partial.basis.adjoint(), Tolerance::default())?;
    Ok(complement.basis.columns(0, extra).into_owned())
}

/// Largest absolute entry (0 for empty matrices).
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |m^H m - I|`.
pub fn orthonormality_residual(m: &CMatrix) -> f64 {
    let k = m.ncols();
    max_abs(&(m.adjoint() * m - CMatrix::identity(k, k)))
}

/// `(m + m^H) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::from(0.5)
}

pub fn is_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidMatrix("matrix has non-finite entries".into()))
    }
}

/// Real-composite form `[[Re a, -Im a], [Im a, Re a]]`, stored with zero
/// imaginary parts. Maps the complex channel `y = a x` onto the real channel
/// acting on stacked in-phase/quadrature components.
pub fn real_composite(a: &CMatrix) -> CMatrix {
    let (m, n) = a.shape();
    CMatrix::from_fn(2 * m, 2 * n, |i, j| {
        let z = a[(i % m, j % n)];
        let v = match (i < m, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        };
        C64::from(v)
    })
}

fn numerical_rank(singular: &[f64], tol: Tolerance) -> usize {
    let Some(&smax) = singular.first() else {
        return 0;
    };
    let cut = tol.cutoff(smax);
    singular.iter().take_while(|&&s| s > cut).count()
}

struct Decomposition {
    /// Descending singular values. With `full_v` this has `cols` entries,
    /// zero-padded past `min(rows, cols)`.
    singular: Vec<f64>,
    /// Left singular vectors for the first `min(rows, cols)` singular values.
    u: CMatrix,
    /// Right singular vectors as columns; all `cols` of them with `full_v`.
    v: CMatrix,
}

// The SVD itself comes from faer. nalgebra's `try_svd` with a tight
// convergence threshold returned a wrong leading singular pair for some
// exactly rank-deficient inputs (e.g. a rank-1 4x2 real matrix).
fn decompose(a: &CMatrix, full_v: bool) -> Result<Decomposition> {
    let (m, n) = a.shape();
    let k = m.min(n);
    let failed = |_| Error::NumericalFailure("SVD did not converge".into());
    let (sv, u, v) = if is_real(a) {
        let f = faer::Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)].re);
        let svd = if full_v { f.svd() } else { f.thin_svd() }.map_err(failed)?;
        let s = svd.S().column_vector();
        let (fu, fv) = (svd.U(), svd.V());
        (
            (0..k).map(|i| s[i]).collect::<Vec<f64>>(),
            CMatrix::from_fn(m, k, |i, j| C64::from(fu[(i, j)])),
            CMatrix::from_fn(n, fv.ncols(), |i, j| C64::from(fv[(i, j)])),
        )
    } else {
        let f = faer::Mat::<faer::c64>::from_fn(m, n, |i, j| {
            let z = a[(i, j)];
            faer::c64::new(z.re, z.im)
        });
        let svd = if full_v { f.svd() } else { f.thin_svd() }.map_err(failed)?;
        let s = svd.S().column_vector();
        let (fu, fv) = (svd.U(), svd.V());
        let lift = |z: faer::c64| C64::new(z.re, z.im);
        (
            (0..k).map(|i| s[i].re).collect::<Vec<f64>>(),
            CMatrix::from_fn(m, k, |i, j| lift(fu[(i, j)])),
            CMatrix::from_fn(n, fv.ncols(), |i, j| lift(fv[(i, j)])),
        )
    };
    let mut singular = sv;
    if full_v {
        singular.resize(n, 0.0);
    }
    Ok(Decomposition { singular, u, v })
}
