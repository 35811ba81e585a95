//! Splitting a ring *-homomorphism into complex-linear and conjugate-linear
//! parts.
//!
//! With `T = -i phi(i 1_A)`, `T` is a central selfadjoint unitary of the
//! algebra generated by the image, so `P = (T + 1)/2` and `Q = 1 - P` are
//! complementary central projections. `a -> P phi(a)` is complex-linear and
//! `a -> Q phi(a)` is conjugate-linear.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{center, Element, SPAN_REL_TOL};
use crate::error::{Error, Result};
use crate::hom::{restrict_codomain, RealLinearMap};
use crate::spectral::operator_norm;

/// Relative eigenvalue cutoff of the Gram matrix used by the center
/// computation; corresponds to singular values about `1e-5` times the
/// largest.
pub const CENTER_TOL: f64 = 1e-10;

/// Bound on `||phi1(a) + phi2(a) - phi(a)||` over realified basis elements.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Linear,
    ConjugateLinear,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeOptions {
    /// Restrict the codomain to the *-subalgebra generated by the image
    /// before measuring the center. Without it, `T` need not be central in
    /// the full codomain and the center dimension refers to the codomain.
    pub restrict: bool,
    /// Check centrality of `T` against a basis of the whole (restricted or
    /// full) codomain instead of the images of the domain basis.
    pub strict: bool,
    pub tol: f64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            restrict: true,
            strict: false,
            tol: crate::hom::DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(rename = "T")]
    pub t: Element,
    #[serde(rename = "P")]
    pub p: Element,
    #[serde(rename = "Q")]
    pub q: Element,
    pub phi1: RealLinearMap,
    pub phi2: RealLinearMap,
    #[serde(rename = "residual_T_selfadjoint")]
    pub residual_t_selfadjoint: f64,
    #[serde(rename = "residual_T_squares_to_one")]
    pub residual_t_squares_to_one: f64,
    pub residual_central: f64,
    pub residual_projection: f64,
    pub residual_sum: f64,
    pub residual_linear: f64,
    pub residual_conjlinear: f64,
    pub residual_reconstruction: f64,
    pub center_dimension: usize,
    pub classification: Classification,
    /// Whether the codomain was restricted to the generated subalgebra.
    pub restricted: bool,
}

impl Decomposition {
    /// Named residuals in a fixed order.
    pub fn residuals(&self) -> [(&'static str, f64); 8] {
        [
            ("residual_T_selfadjoint", self.residual_t_selfadjoint),
            ("residual_T_squares_to_one", self.residual_t_squares_to_one),
            ("residual_central", self.residual_central),
            ("residual_projection", self.residual_projection),
            ("residual_sum", self.residual_sum),
            ("residual_linear", self.residual_linear),
            ("residual_conjlinear", self.residual_conjlinear),
            ("residual_reconstruction", self.residual_reconstruction),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

/// [`decompose_with`] with default options (restricted, non-strict).
pub fn decompose(m: &RealLinearMap, tol: f64) -> Result<Decomposition> {
    decompose_with(
        m,
        &DecomposeOptions {
            tol,
            ..DecomposeOptions::default()
        },
    )
}

/// Builds `T`, `P`, `Q`, the split maps, and every residual. Any residual
/// above `opts.tol` is an error: the input was not a ring *-homomorphism.
pub fn decompose_with(m: &RealLinearMap, opts: &DecomposeOptions) -> Result<Decomposition> {
    let dec = build(m, opts)?;
    for (name, value) in dec.residuals() {
        let bound = if name == "residual_reconstruction" {
            RECONSTRUCTION_TOL.max(opts.tol)
        } else {
            opts.tol
        };
        if !(value <= bound) {
            return Err(Error::DecompositionResidual { name, value, tol: bound });
        }
    }
    Ok(dec)
}

/// Same as [`decompose_with`] but returns the decomposition even when some
/// residual exceeds the tolerance.
pub fn decompose_unchecked(m: &RealLinearMap, opts: &DecomposeOptions) -> Result<Decomposition> {
    build(m, opts)
}

fn build(m: &RealLinearMap, opts: &DecomposeOptions) -> Result<Decomposition> {
    let dom = m.domain();
    let i = Complex64::new(0.0, 1.0);
    let one_a = Element::identity(dom);

    let (unit, algebra_basis) = if opts.restrict {
        let r = restrict_codomain(m, SPAN_REL_TOL)?;
        (r.unit, r.basis)
    } else {
        let full = Element::matrix_units(m.codomain());
        (Element::identity(m.codomain()), full)
    };

    let t = m.image(&one_a.scale(i)).scale(-i);
    let p = (&t + &unit).scale_real(0.5);
    let q = &unit - &p;

    let residual_t_selfadjoint = operator_norm(&(&t - &t.adjoint()));
    let residual_t_squares_to_one = operator_norm(&(&(&t * &t) - &unit));

    let images: Vec<Element> = (0..dom.real_dim()).map(|k| m.basis_image(k)).collect();
    let central_against: &[Element] = if opts.strict { &algebra_basis } else { &images };
    let mut residual_central: f64 = 0.0;
    for x in central_against {
        residual_central = residual_central.max(operator_norm(&t.commutator(x)?));
    }

    let residual_projection = [
        operator_norm(&(&(&p * &p) - &p)),
        operator_norm(&(&p - &p.adjoint())),
        operator_norm(&(&(&q * &q) - &q)),
        operator_norm(&(&q - &q.adjoint())),
        operator_norm(&(&p * &q)),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let residual_sum = operator_norm(&(&(&p + &q) - &unit));

    let phi1 = m.left_multiplied(&p)?;
    let phi2 = m.left_multiplied(&q)?;

    let mut residual_linear: f64 = 0.0;
    let mut residual_conjlinear: f64 = 0.0;
    let mut residual_reconstruction: f64 = 0.0;
    for (k, e) in crate::algebra::Element::real_basis(dom).iter().enumerate() {
        let ie = e.scale(i);
        let p1 = phi1.basis_image(k);
        let p2 = phi2.basis_image(k);
        residual_linear = residual_linear.max(operator_norm(&(&phi1.image(&ie) - &p1.scale(i))));
        residual_conjlinear = residual_conjlinear.max(operator_norm(&(&phi2.image(&ie) + &p2.scale(i))));
        residual_reconstruction = residual_reconstruction.max(operator_norm(&(&(&p1 + &p2) - &images[k])));
    }

    let center_dimension = center(&algebra_basis, CENTER_TOL)?.len();
    let classification = if operator_norm(&q) <= opts.tol {
        Classification::Linear
    } else if operator_norm(&p) <= opts.tol {
        Classification::ConjugateLinear
    } else {
        Classification::Mixed
    };

    Ok(Decomposition {
        t,
        p,
        q,
        phi1,
        phi2,
        residual_t_selfadjoint,
        residual_t_squares_to_one,
        residual_central,
        residual_projection,
        residual_sum,
        residual_linear,
        residual_conjlinear,
        residual_reconstruction,
        center_dimension,
        classification,
        restricted: opts.restrict,
    })
}

/// Linear, conjugate-linear or mixed, via [`decompose`].
pub fn classify(m: &RealLinearMap, tol: f64) -> Result<Classification> {
    decompose(m, tol).map(|d| d.classification)
}
