use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::RealLinearMap;
use crate::algebra::{generated_star_subalgebra_nonunital, AlgebraSignature, Element, RealMatrix};
use crate::error::Result;
use crate::linalg::real_svd;
use crate::spectral::operator_norm;

/// A map is injective when its smallest singular value exceeds this.
pub const INJECTIVITY_TOL: f64 = 1e-8;

/// Relative residual below which a vector counts as lying in a subspace
/// during re-complexification.
const MEMBERSHIP_TOL: f64 = 1e-6;

/// Null space of a map.
#[derive(Clone, Debug)]
pub struct Kernel {
    sig: AlgebraSignature,
    /// Orthonormal basis of the real null space, in realified coordinates.
    real_basis: Vec<Vec<f64>>,
    basis: Vec<Element>,
    complex_closed: bool,
}

impl Kernel {
    /// Elements spanning the kernel: a complex basis, orthonormal under the
    /// trace inner product, when the real null space is closed under
    /// multiplication by `i`; otherwise the real null-space basis.
    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn is_trivial(&self) -> bool {
        self.real_basis.is_empty()
    }

    /// True when the real null space is a complex subspace.
    pub fn is_complex_closed(&self) -> bool {
        self.complex_closed
    }

    pub fn real_dim(&self) -> usize {
        self.real_basis.len()
    }

    /// Frobenius distance from `x` to the kernel, relative to `||x||_F`.
    pub fn relative_distance(&self, x: &Element) -> f64 {
        let norm = x.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut v = x.realify().coords;
        for _ in 0..2 {
            for b in &self.real_basis {
                let c: f64 = b.iter().zip(&v).map(|(p, q)| p * q).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        v.iter().map(|t| t * t).sum::<f64>().sqrt() / norm
    }
}

/// Basis of the null space of `m`. Singular values at most
/// `tol * max(1, sigma_max)` count as zero.
pub fn kernel(m: &RealLinearMap, tol: f64) -> Kernel {
    let svd = real_svd(m.matrix());
    let threshold = tol * svd.largest().max(1.0);
    let real_basis = svd.null_space(threshold);
    let sig = m.domain().clone();
    let mut k = Kernel {
        sig: sig.clone(),
        real_basis,
        basis: Vec::new(),
        complex_closed: true,
    };

    let i = Complex64::new(0.0, 1.0);
    let elems: Vec<Element> = k
        .real_basis
        .iter()
        .map(|v| Element::unrealify_slice(v, &sig).expect("null vectors have domain length"))
        .collect();
    k.complex_closed = elems.iter().all(|x| k.relative_distance(&x.scale(i)) <= MEMBERSHIP_TOL);
    if !k.complex_closed {
        k.basis = elems;
        return k;
    }

    let mut complex_basis: Vec<Element> = Vec::new();
    for x in elems {
        let mut r = x.clone();
        for _ in 0..2 {
            for b in &complex_basis {
                let c = b.inner(&r).expect("same signature");
                r = &r - &b.scale(c);
            }
        }
        let rn = r.frobenius_norm();
        if rn > MEMBERSHIP_TOL * x.frobenius_norm() {
            complex_basis.push(r.scale_real(1.0 / rn));
        }
    }
    k.basis = complex_basis;
    k
}

/// Worst relative distance from the kernel after each ideal operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealResiduals {
    pub complex_scaling: f64,
    pub adjoint: f64,
    pub left_multiplication: f64,
    pub right_multiplication: f64,
}

impl IdealResiduals {
    pub fn max(&self) -> f64 {
        self.complex_scaling
            .max(self.adjoint)
            .max(self.left_multiplication)
            .max(self.right_multiplication)
    }
}

/// Checks that the kernel is a *-closed two-sided ideal: every basis element
/// is moved by `i`, by a random complex scalar, by the adjoint, and by left
/// and right multiplication with `samples` random elements, and the image's
/// relative distance from the kernel is recorded.
pub fn kernel_ideal_residuals(kernel: &Kernel, samples: usize, seed: u64) -> IdealResiduals {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = &kernel.sig;
    let multipliers: Vec<Element> = (0..samples).map(|_| Element::random_with(sig, &mut rng)).collect();
    let scalar = Element::random_with(&AlgebraSignature::new(vec![1]).expect("valid"), &mut rng).block(0)[(0, 0)];
    let mut out = IdealResiduals {
        complex_scaling: 0.0,
        adjoint: 0.0,
        left_multiplication: 0.0,
        right_multiplication: 0.0,
    };
    for x in kernel.basis() {
        for z in [Complex64::new(0.0, 1.0), scalar] {
            out.complex_scaling = out.complex_scaling.max(kernel.relative_distance(&x.scale(z)));
        }
        out.adjoint = out.adjoint.max(kernel.relative_distance(&x.adjoint()));
        for y in &multipliers {
            out.left_multiplication = out.left_multiplication.max(kernel.relative_distance(&(y * x)));
            out.right_multiplication = out.right_multiplication.max(kernel.relative_distance(&(x * y)));
        }
    }
    out
}

/// Outcome of comparing injectivity with isometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub injective: bool,
    pub smallest_singular_value: f64,
    /// `max | ||phi(a)|| - ||a|| |` over random samples and normalized kernel
    /// elements.
    pub max_norm_deviation: f64,
    /// Largest deviation among normalized kernel elements (0 when the
    /// kernel is trivial).
    pub kernel_deviation: f64,
    /// Injective maps deviate by at most `tol`; non-injective maps exhibit a
    /// kernel element deviating by at least `1 - tol`.
    pub consistent: bool,
}

/// Decides injectivity from the smallest singular value and checks it
/// against norm preservation. Intended for maps that pass [`super::verify`].
pub fn isometry_check(m: &RealLinearMap, trials: usize, seed: u64, tol: f64) -> IsometryReport {
    let svd = real_svd(m.matrix());
    let smallest = svd.smallest();
    let injective = smallest > INJECTIVITY_TOL;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deviation: f64 = 0.0;
    for _ in 0..trials {
        let a = Element::random_with(m.domain(), &mut rng);
        deviation = deviation.max((operator_norm(&m.image(&a)) - operator_norm(&a)).abs());
    }
    let mut kernel_deviation: f64 = 0.0;
    if !injective {
        for x in kernel(m, INJECTIVITY_TOL).basis() {
            let n = operator_norm(x);
            if n == 0.0 {
                continue;
            }
            let unit = x.scale_real(1.0 / n);
            kernel_deviation = kernel_deviation.max((operator_norm(&m.image(&unit)) - 1.0).abs());
        }
        deviation = deviation.max(kernel_deviation);
    }
    let consistent = if injective {
        deviation <= tol
    } else {
        kernel_deviation >= 1.0 - tol
    };
    IsometryReport {
        injective,
        smallest_singular_value: smallest,
        max_norm_deviation: deviation,
        kernel_deviation,
        consistent,
    }
}

/// A map re-expressed inside the *-subalgebra generated by its image.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// Orthonormal (trace inner product) basis of the generated subalgebra.
    pub basis: Vec<Element>,
    /// `2s x 2d_A` real matrix: realified coefficients of `phi(a)` in `basis`
    /// (real parts of the `s` coefficients, then imaginary parts).
    pub coordinates: RealMatrix,
    /// `phi(1_A)`, the unit of the subalgebra.
    pub unit: Element,
    /// `max_k ||embed(coords(e_k)) - phi(e_k)||_F` over realified basis
    /// elements: how far the image sticks out of the subalgebra.
    pub image_residual: f64,
    /// `max_b max(||u b - b||_F, ||b u - b||_F)` with `u = phi(1_A)`.
    pub unit_residual: f64,
}

impl Restriction {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Element of the ambient codomain with the given realified coefficients.
    pub fn embed(&self, coords: &[f64]) -> Element {
        let s = self.basis.len();
        assert_eq!(coords.len(), 2 * s, "coordinate length mismatch");
        let mut out = Element::zero(self.unit.signature());
        for (k, b) in self.basis.iter().enumerate() {
            out = &out + &b.scale(Complex64::new(coords[k], coords[s + k]));
        }
        out
    }
}

/// Restricts the codomain of `m` to the *-subalgebra generated by its image.
/// `tol` is the relative rank threshold of the span saturation.
pub fn restrict_codomain(m: &RealLinearMap, tol: f64) -> Result<Restriction> {
    let images: Vec<Element> = (0..m.domain().real_dim()).map(|k| m.basis_image(k)).collect();
    let basis = generated_star_subalgebra_nonunital(&images, tol)?;
    let s = basis.len();
    let unit = m.image(&Element::identity(m.domain()));

    let mut coordinates = RealMatrix::zeros(2 * s, images.len());
    let mut image_residual: f64 = 0.0;
    for (k, img) in images.iter().enumerate() {
        let mut rebuilt = Element::zero(m.codomain());
        for (j, b) in basis.iter().enumerate() {
            let c = b.inner(img)?;
            coordinates[(j, k)] = c.re;
            coordinates[(s + j, k)] = c.im;
            rebuilt = &rebuilt + &b.scale(c);
        }
        image_residual = image_residual.max((&rebuilt - img).frobenius_norm());
    }
    let mut unit_residual: f64 = 0.0;
    for b in &basis {
        unit_residual = unit_residual
            .max((&(&unit * b) - b).frobenius_norm())
            .max((&(b * &unit) - b).frobenius_norm());
    }
    Ok(Restriction {
        basis,
        coordinates,
        unit,
        image_residual,
        unit_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{CMatrix, SPAN_REL_TOL};
    use crate::hom::{compile, StructuredHom, DEFAULT_TOL};

    fn sig(dims: &[usize]) -> AlgebraSignature {
        AlgebraSignature::new(dims.to_vec()).unwrap()
    }

    fn projection() -> RealLinearMap {
        RealLinearMap::new(
            sig(&[1, 1]),
            sig(&[1]),
            RealMatrix::from_row_major(2, 4, vec![1., 0., 0., 0., 0., 0., 1., 0.]).unwrap(),
        )
        .unwrap()
    }

    fn mixed() -> RealLinearMap {
        RealLinearMap::from_fn(&sig(&[1]), &sig(&[2]), |z| {
            let v = z.block(0)[(0, 0)];
            Element::from_matrix(CMatrix::from_diagonal(&[v, v.conj()]))
        })
    }

    #[test]
    fn injective_map_has_trivial_kernel() {
        let k = kernel(&compile(&StructuredHom::conjugation(&sig(&[2]))).unwrap(), INJECTIVITY_TOL);
        assert!(k.is_trivial());
        assert!(k.basis().is_empty());
    }

    #[test]
    fn projection_kernel_is_second_summand() {
        let k = kernel(&projection(), INJECTIVITY_TOL);
        assert_eq!(k.real_dim(), 2);
        assert!(k.is_complex_closed());
        assert_eq!(k.basis().len(), 1);
        let x = &k.basis()[0];
        assert_eq!(x.block(0)[(0, 0)].norm(), 0.0);
        assert!((x.block(1)[(0, 0)].norm() - 1.0).abs() < 1e-15);
        let r = kernel_ideal_residuals(&k, 20, 1);
        assert!(r.max() < 1e-14, "{r:?}");
    }

    #[test]
    fn real_but_not_complex_kernel_is_reported() {
        // z -> Re z keeps only the real part: kernel iR is not a complex subspace.
        let m = RealLinearMap::new(
            sig(&[1]),
            sig(&[1]),
            RealMatrix::from_row_major(2, 2, vec![1., 0., 0., 0.]).unwrap(),
        )
        .unwrap();
        let k = kernel(&m, INJECTIVITY_TOL);
        assert_eq!(k.real_dim(), 1);
        assert!(!k.is_complex_closed());
        assert!(kernel_ideal_residuals(&k, 5, 0).complex_scaling > 0.9);
    }

    #[test]
    fn isometry_examples() {
        let conj = compile(&StructuredHom::conjugation(&sig(&[1]))).unwrap();
        let r = isometry_check(&conj, 30, 1, DEFAULT_TOL);
        assert!(r.injective && r.consistent && r.max_norm_deviation == 0.0);

        let r = isometry_check(&mixed(), 30, 2, DEFAULT_TOL);
        assert!(r.injective && r.consistent && r.max_norm_deviation <= 1e-10);

        let r = isometry_check(&projection(), 30, 3, DEFAULT_TOL);
        assert!(!r.injective && r.consistent);
        assert_eq!(r.kernel_deviation, 1.0);
    }

    #[test]
    fn restriction_of_mixed_map_is_diagonal() {
        let r = restrict_codomain(&mixed(), SPAN_REL_TOL).unwrap();
        assert_eq!(r.dim(), 2);
        for b in &r.basis {
            assert!(b.block(0)[(0, 1)].norm() < 1e-15 && b.block(0)[(1, 0)].norm() < 1e-15);
        }
        assert!(r.image_residual < 1e-14 && r.unit_residual < 1e-14);
        // coordinates reproduce the map
        let z = Element::complex_number(Complex64::new(0.3, -1.2));
        let coords = r.coordinates.mul_vec(&z.realify().coords);
        assert!((&r.embed(&coords) - &mixed().apply(&z).unwrap()).max_abs() < 1e-14);
    }

    #[test]
    fn restriction_of_identity_and_conjugation() {
        let s = sig(&[2, 1]);
        assert_eq!(restrict_codomain(&RealLinearMap::identity(&s), SPAN_REL_TOL).unwrap().dim(), s.dim());
        let conj = compile(&StructuredHom::conjugation(&sig(&[1]))).unwrap();
        assert_eq!(restrict_codomain(&conj, SPAN_REL_TOL).unwrap().dim(), 1);
    }

    #[test]
    fn restriction_of_non_unital_corner_map() {
        // a -> diag(a, 0): unit of the generated subalgebra is E_11, not 1_B.
        let m = RealLinearMap::from_fn(&sig(&[1]), &sig(&[2]), |z| {
            Element::from_matrix(CMatrix::from_diagonal(&[z.block(0)[(0, 0)], Complex64::new(0.0, 0.0)]))
        });
        let r = restrict_codomain(&m, SPAN_REL_TOL).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.unit_residual < 1e-15);
        assert_eq!(r.unit.block(0)[(1, 1)].norm(), 0.0);
    }
}
