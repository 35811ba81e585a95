//! Spectra, norms and positivity.
//!
//! Besides the direct eigenvalue route to the operator norm, this module
//! carries two independent characterizations of it: the 2x2 dilation test
//! (`||a|| <= r` iff `[[r1, a], [a^*, r1]]` is positive), driven by
//! bisection in [`norm_by_bisection`], and the order-interval formula for
//! selfadjoint elements in [`order_norm`].

use num_complex::Complex64;

use crate::algebra::{CMatrix, Element};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, hermitian_eigen, hermitian_max_eigenvalue};

/// Relative asymmetry accepted by the Hermitian routines.
pub const SELFADJOINT_TOL: f64 = 1e-10;

/// Positivity tolerance used by the dilation predicate inside
/// [`norm_by_bisection`]; far below any precision a caller can request.
const BISECTION_POSITIVITY_TOL: f64 = 1e-13;

/// Per-block eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralData {
    /// Selfadjoint input: real eigenvalues, ascending within each block.
    Real(Vec<Vec<f64>>),
    /// General input: complex eigenvalues, unordered.
    Complex(Vec<Vec<Complex64>>),
}

impl SpectralData {
    /// All eigenvalues across blocks as complex numbers.
    pub fn values(&self) -> Vec<Complex64> {
        match self {
            SpectralData::Real(blocks) => blocks.iter().flatten().map(|&x| Complex64::new(x, 0.0)).collect(),
            SpectralData::Complex(blocks) => blocks.iter().flatten().copied().collect(),
        }
    }

    pub fn radius(&self) -> f64 {
        self.values().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest real eigenvalue; `None` for complex spectra.
    pub fn min_real(&self) -> Option<f64> {
        match self {
            SpectralData::Real(blocks) => blocks.iter().filter_map(|b| b.first().copied()).reduce(f64::min),
            SpectralData::Complex(_) => None,
        }
    }

    pub fn max_real(&self) -> Option<f64> {
        match self {
            SpectralData::Real(blocks) => blocks.iter().filter_map(|b| b.last().copied()).reduce(f64::max),
            SpectralData::Complex(_) => None,
        }
    }
}

fn check_selfadjoint(h: &Element, tol: f64) -> Result<()> {
    let asym = h.asymmetry();
    if asym > tol * (1.0 + h.frobenius_norm()) {
        Err(Error::NotSelfadjoint { asymmetry: asym })
    } else {
        Ok(())
    }
}

/// Real eigenvalues of a selfadjoint element, sorted ascending per block.
pub fn hermitian_eigenvalues(h: &Element) -> Result<SpectralData> {
    check_selfadjoint(h, SELFADJOINT_TOL)?;
    Ok(SpectralData::Real(
        h.blocks().iter().map(|b| hermitian_eigen(b, false).0).collect(),
    ))
}

fn block_norm(b: &CMatrix) -> f64 {
    match b.dim() {
        0 => 0.0,
        1 => b[(0, 0)].norm(),
        _ => {
            hermitian_max_eigenvalue(&b.gram()).max(0.0).sqrt()
        }
    }
}

/// Largest singular value over all blocks.
pub fn operator_norm(a: &Element) -> f64 {
    a.blocks().iter().map(block_norm).fold(0.0, f64::max)
}

/// The spectrum: union of block eigenvalues. Selfadjoint elements (within
/// [`SELFADJOINT_TOL`]) go through the Hermitian solver.
pub fn spectrum(a: &Element) -> SpectralData {
    if a.asymmetry() <= SELFADJOINT_TOL * (1.0 + a.frobenius_norm()) {
        SpectralData::Real(a.blocks().iter().map(|b| hermitian_eigen(b, false).0).collect())
    } else {
        SpectralData::Complex(a.blocks().iter().map(eigenvalues).collect())
    }
}

pub fn spectral_radius(a: &Element) -> f64 {
    spectrum(a).radius()
}

/// `a` is selfadjoint within `tol` and its smallest eigenvalue is at least
/// `-tol * (1 + ||a||)`.
pub fn is_positive(a: &Element, tol: f64) -> bool {
    if check_selfadjoint(a, tol).is_err() {
        return false;
    }
    let mut min = f64::INFINITY;
    let mut norm: f64 = 0.0;
    for b in a.blocks() {
        let (w, _) = hermitian_eigen(b, false);
        if let (Some(&lo), Some(&hi)) = (w.first(), w.last()) {
            min = min.min(lo);
            norm = norm.max(lo.abs()).max(hi.abs());
        }
    }
    min >= -tol * (1.0 + norm)
}

/// Positive square root `v` of a positive element, so that `v^* v = a`.
pub fn positive_factor(a: &Element, tol: f64) -> Result<Element> {
    check_selfadjoint(a, tol)?;
    let mut blocks = Vec::with_capacity(a.blocks().len());
    let mut norm: f64 = 0.0;
    let mut min = f64::INFINITY;
    let mut decomps = Vec::with_capacity(a.blocks().len());
    for b in a.blocks() {
        let (w, v) = hermitian_eigen(b, true);
        for &x in &w {
            norm = norm.max(x.abs());
            min = min.min(x);
        }
        decomps.push((w, v));
    }
    if min < -tol * (1.0 + norm) {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    for (w, v) in decomps {
        let roots: Vec<_> = w.iter().map(|&x| Complex64::new(x.max(0.0).sqrt(), 0.0)).collect();
        blocks.push(&(&v * &CMatrix::from_diagonal(&roots)) * &v.adjoint());
    }
    Element::from_blocks(a.signature().clone(), blocks)
}

/// `[[r 1, a], [a^*, r 1]]` in `M_2(A)`.
pub fn dilation(a: &Element, r: f64) -> Element {
    let r1 = Element::scalar(a.signature(), Complex64::new(r, 0.0));
    Element::from_corners([[&r1, a], [&a.adjoint(), &r1]]).expect("corners share a signature")
}

/// Decides `||a|| <= r` through positivity of the dilation.
pub fn dilation_norm_bound(a: &Element, r: f64, tol: f64) -> bool {
    is_positive(&dilation(a, r), tol)
}

/// The norm recovered by bisection on the dilation predicate.
///
/// The bracket starts at `[0, sum |entries|]` and is halved until its width
/// is at most `precision`; the upper endpoint is returned. Midpoints are
/// dyadic rationals, so every bound tested is a rational upper bound.
pub fn norm_by_bisection(a: &Element, precision: f64) -> Result<f64> {
    if !(precision > 0.0) {
        return Err(Error::InvalidArgument(format!("precision must be positive, got {precision}")));
    }
    let mut lo = 0.0;
    let mut hi = a.entry_abs_sum();
    if dilation_norm_bound(a, lo, BISECTION_POSITIVITY_TOL) {
        return Ok(lo);
    }
    while hi - lo > precision {
        let mid = 0.5 * (lo + hi);
        if dilation_norm_bound(a, mid, BISECTION_POSITIVITY_TOL) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `min { l : -l 1 <= x <= l 1 }` for selfadjoint `x`, evaluated in closed
/// form as the larger of `|min eigenvalue|` and `|max eigenvalue|`.
pub fn order_norm(x: &Element) -> Result<f64> {
    let spec = hermitian_eigenvalues(x)?;
    let lo = spec.min_real().unwrap_or(0.0);
    let hi = spec.max_real().unwrap_or(0.0);
    Ok(lo.abs().max(hi.abs()))
}
