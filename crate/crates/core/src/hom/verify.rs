use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::RealLinearMap;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::spectral::operator_norm;

/// Rational scalars `k` for which `phi(k a) = k phi(a)` is measured.
pub const RATIONAL_SCALARS: [f64; 8] = [0.5, -0.5, 2.0 / 3.0, -2.0 / 3.0, 7.0 / 5.0, -7.0 / 5.0, 3.0, -3.0];

/// Irrational scalars `r` for which `phi(r a) = r phi(a)` is measured.
pub const IRRATIONAL_SCALARS: [f64; 3] = [std::f64::consts::SQRT_2, -std::f64::consts::PI, std::f64::consts::E];

/// Multiplicativity is checked on every pair of realified basis elements up
/// to this complex domain dimension.
const EXHAUSTIVE_DIM: usize = 16;

/// Per-law residuals of a candidate ring *-homomorphism.
///
/// Residual numerators are Frobenius norms of the defect, an upper bound for
/// its operator norm; the multiplicative defect is divided by
/// `1 + ||a|| ||b||` with operator norms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Always 0: additivity holds by representation.
    pub residual_additive: f64,
    pub residual_multiplicative: f64,
    pub residual_star: f64,
    pub residual_unital: f64,
    pub residual_rational_scaling: f64,
    pub residual_real_linearity: f64,
    /// `min ||a|| - ||phi(a)||` over the sampled elements.
    pub contractivity_margin: f64,
    pub passed: bool,
    /// Number of `(a, b)` pairs on which multiplicativity was evaluated.
    pub samples_used: usize,
    pub seed: u64,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.residual_additive,
            self.residual_multiplicative,
            self.residual_star,
            self.residual_unital,
            self.residual_rational_scaling,
            self.residual_real_linearity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Measures every ring *-homomorphism law of `m` against the codomain unit.
///
/// Samples: all pairs of realified basis elements when the domain has
/// complex dimension at most 16, plus `trials` seeded random pairs.
pub fn verify(m: &RealLinearMap, trials: usize, seed: u64, tol: f64) -> VerificationReport {
    let unit = Element::identity(m.codomain());
    verify_with_unit(m, &unit, trials, seed, tol).expect("unit has the codomain signature")
}

/// [`verify`] with unitality measured against `unit` instead of `1_B`. Used
/// for maps into a corner `p B p`, whose unit is `p`.
pub fn verify_with_unit(
    m: &RealLinearMap,
    unit: &Element,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    m.codomain().ensure_eq(unit.signature())?;
    let dom = m.domain();
    let d = dom.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let basis = Element::real_basis(dom);
    let basis_images: Vec<Element> = (0..basis.len()).map(|k| m.basis_image(k)).collect();
    let randoms: Vec<(Element, Element)> = (0..trials)
        .map(|_| (Element::random_with(dom, &mut rng), Element::random_with(dom, &mut rng)))
        .collect();

    let mut mult: f64 = 0.0;
    let mut pairs = 0usize;
    if d <= EXHAUSTIVE_DIM {
        for (x, fx) in basis.iter().zip(&basis_images) {
            for (y, fy) in basis.iter().zip(&basis_images) {
                let defect = &m.image(&(x * y)) - &(fx * fy);
                // basis elements have norm 1
                mult = mult.max(defect.frobenius_norm() / 2.0);
                pairs += 1;
            }
        }
    }
    for (a, b) in &randoms {
        let defect = &m.image(&(a * b)) - &(&m.image(a) * &m.image(b));
        let denom = 1.0 + operator_norm(a) * operator_norm(b);
        mult = mult.max(defect.frobenius_norm() / denom);
        pairs += 1;
    }

    let one = Element::identity(dom);
    let mut star: f64 = 0.0;
    for x in basis.iter().chain(std::iter::once(&one)).chain(randoms.iter().map(|(a, _)| a)) {
        let defect = &m.image(&x.adjoint()) - &m.image(x).adjoint();
        star = star.max(defect.frobenius_norm());
    }

    let unital = (&m.image(&one) - unit).frobenius_norm();

    let mut rational: f64 = 0.0;
    let mut real: f64 = 0.0;
    for (a, _) in &randoms {
        let fa = m.image(a);
        for k in RATIONAL_SCALARS {
            rational = rational.max((&m.image(&a.scale_real(k)) - &fa.scale_real(k)).frobenius_norm());
        }
        for r in IRRATIONAL_SCALARS {
            real = real.max((&m.image(&a.scale_real(r)) - &fa.scale_real(r)).frobenius_norm());
        }
    }

    let mut margin = f64::INFINITY;
    for (x, fx) in basis.iter().zip(&basis_images) {
        margin = margin.min(operator_norm(x) - operator_norm(fx));
    }
    for (a, _) in &randoms {
        margin = margin.min(operator_norm(a) - operator_norm(&m.image(a)));
    }

    let residuals = [mult, star, unital, rational, real];
    let passed = residuals.iter().all(|&r| r <= tol);
    Ok(VerificationReport {
        residual_additive: 0.0,
        residual_multiplicative: mult,
        residual_star: star,
        residual_unital: unital,
        residual_rational_scaling: rational,
        residual_real_linearity: real,
        contractivity_margin: margin,
        passed,
        samples_used: pairs,
        seed,
    })
}

/// `min ||a|| - ||phi(a)||` over `trials` random elements, every realified
/// basis element under a random positive scale, `trials` selfadjoint
/// elements and `trials` positive elements `v^* v`.
///
/// No precondition is checked; see [`check_contractivity`].
pub fn contractivity_margin(m: &RealLinearMap, trials: usize, seed: u64) -> f64 {
    let dom = m.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut margin = f64::INFINITY;
    let mut probe = |a: &Element| {
        margin = margin.min(operator_norm(a) - operator_norm(&m.image(a)));
    };
    for k in 0..dom.real_dim() {
        let s: f64 = 10f64.powf(rng.random_range(-1.0..1.0));
        probe(&Element::real_basis_element(dom, k).scale_real(s));
    }
    for _ in 0..trials {
        let a = Element::random_with(dom, &mut rng);
        probe(&a);
        probe(&(&a + &a.adjoint()));
        probe(&(&a.adjoint() * &a));
    }
    margin
}

/// Contractivity margin of a verified map.
///
/// Runs [`verify`] first and returns [`Error::Unverified`] when it fails,
/// since the margin is only meaningful for genuine homomorphisms. For every
/// verified map the returned margin is expected to be `>= -tol`.
pub fn check_contractivity(m: &RealLinearMap, trials: usize, seed: u64, tol: f64) -> Result<f64> {
    let report = verify(m, trials, seed, tol);
    if !report.passed {
        return Err(Error::Unverified(format!(
            "largest law residual {:e} exceeds {tol:e}",
            report.max_residual()
        )));
    }
    Ok(contractivity_margin(m, trials, seed))
}
