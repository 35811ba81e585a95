use num_complex::Complex64;

use super::element::{AlgebraSignature, Element};
use super::matrix::CMatrix;
use crate::error::Result;
use crate::linalg::hermitian_eigen;

/// Default relative rank threshold for span saturation.
pub const SPAN_REL_TOL: f64 = 1e-10;

/// Incrementally built orthonormal basis under the trace inner product.
///
/// Candidates are orthogonalized twice (classical Gram-Schmidt with one
/// re-orthogonalization pass) and accepted when the remaining component is
/// larger than `tol` times a reference scale. The scale must not be the
/// candidate's own norm: a product like `P_1 P_2` of orthogonal projections
/// is pure round-off and would otherwise be accepted as a new direction.
struct OrthoBasis {
    sig: AlgebraSignature,
    vectors: Vec<Vec<Complex64>>,
    tol: f64,
}

impl OrthoBasis {
    fn new(sig: AlgebraSignature, tol: f64) -> Self {
        Self {
            sig,
            vectors: Vec::new(),
            tol,
        }
    }

    fn try_insert(&mut self, candidate: &Element, reference: f64) -> bool {
        let mut r = candidate.flat();
        if norm(&r) == 0.0 {
            return false;
        }
        for _ in 0..2 {
            for b in &self.vectors {
                let coef: Complex64 = b.iter().zip(&r).map(|(x, y)| x.conj() * y).sum();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= coef * bi;
                }
            }
        }
        let rn = norm(&r);
        if rn <= self.tol * reference {
            return false;
        }
        for z in &mut r {
            *z /= rn;
        }
        self.vectors.push(r);
        true
    }

    fn element(&self, k: usize) -> Element {
        Element::from_flat(&self.sig, &self.vectors[k])
    }

    fn into_elements(self) -> Vec<Element> {
        self.vectors.iter().map(|v| Element::from_flat(&self.sig, v)).collect()
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis (trace inner product) of the unital *-subalgebra
/// generated by `gens`: the smallest complex subspace containing the
/// generators and the unit that is closed under products and adjoints.
///
/// `tol` is the relative rank threshold used when deciding whether a new
/// product enlarges the span (see [`SPAN_REL_TOL`]). An empty generator list
/// yields an empty basis, since no signature is known.
pub fn generated_star_subalgebra(gens: &[Element], tol: f64) -> Result<Vec<Element>> {
    saturate(gens, true, tol)
}

/// Same as [`generated_star_subalgebra`] but without adjoining the ambient
/// unit. For the image of a ring homomorphism this is the algebra whose
/// unit is the image of the domain unit.
pub fn generated_star_subalgebra_nonunital(gens: &[Element], tol: f64) -> Result<Vec<Element>> {
    saturate(gens, false, tol)
}

fn saturate(gens: &[Element], include_unit: bool, tol: f64) -> Result<Vec<Element>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let sig = first.signature().clone();
    for g in gens {
        sig.ensure_eq(g.signature())?;
    }

    // Right multipliers: an orthonormal basis of span(gens + gens^*).
    // Generators are measured against the largest one, products of
    // orthonormal elements against 1 (the Frobenius norm is submultiplicative).
    let scale = gens.iter().map(Element::frobenius_norm).fold(0.0, f64::max);
    let mut multipliers = OrthoBasis::new(sig.clone(), tol);
    for g in gens {
        multipliers.try_insert(g, scale);
        multipliers.try_insert(&g.adjoint(), scale);
    }
    let multipliers = multipliers.into_elements();

    let mut basis = OrthoBasis::new(sig.clone(), tol);
    if include_unit {
        basis.try_insert(&Element::identity(&sig), 1.0);
    }
    for g in &multipliers {
        basis.try_insert(g, 1.0);
    }
    // Every word in the generators is reached by right-multiplying words
    // already in the span by a generator, so one pass over a growing queue
    // saturates the span.
    let mut next = 0;
    while next < basis.vectors.len() {
        let x = basis.element(next);
        for g in &multipliers {
            basis.try_insert(&(&x * g), 1.0);
        }
        next += 1;
    }
    Ok(basis.into_elements())
}

/// Basis of the center of the algebra spanned by `basis`: the elements of
/// the span that commute with every basis element.
///
/// The center is the null space of `c -> ([sum_k c_k b_k, b_m])_m`. It is
/// extracted from the Hermitian Gram matrix of that operator; eigenvalues at
/// or below `tol (sum_k ||b_k||_F^2)^2` are treated as zero. That reference
/// bounds the Gram matrix up to a factor 4, and unlike its largest eigenvalue
/// it does not collapse to round-off when the span is commutative. The returned
/// elements are orthonormal under the trace inner product when `basis` is.
pub fn center(basis: &[Element], tol: f64) -> Result<Vec<Element>> {
    let s = basis.len();
    let Some(first) = basis.first() else {
        return Ok(Vec::new());
    };
    let sig = first.signature().clone();
    for b in basis {
        sig.ensure_eq(b.signature())?;
    }

    let mut gram = CMatrix::zeros(s);
    for bm in basis {
        let comms: Vec<Vec<Complex64>> = basis
            .iter()
            .map(|bk| bk.commutator(bm).map(|c| c.flat()))
            .collect::<Result<_>>()?;
        for k in 0..s {
            for l in k..s {
                let v: Complex64 = comms[k].iter().zip(&comms[l]).map(|(x, y)| x.conj() * y).sum();
                gram[(k, l)] += v;
            }
        }
    }
    for k in 0..s {
        for l in 0..k {
            gram[(k, l)] = gram[(l, k)].conj();
        }
    }

    let (w, v) = hermitian_eigen(&gram, true);
    let mass: f64 = basis.iter().map(|b| b.frobenius_norm().powi(2)).sum();
    let cutoff = tol * mass * mass;
    let mut out = Vec::new();
    for (j, &lambda) in w.iter().enumerate() {
        if lambda > cutoff {
            continue;
        }
        let mut flat = vec![Complex64::new(0.0, 0.0); sig.dim()];
        for (k, bk) in basis.iter().enumerate() {
            let coef = v[(k, j)];
            for (f, e) in flat.iter_mut().zip(bk.entries()) {
                *f += coef * e;
            }
        }
        out.push(Element::from_flat(&sig, &flat));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(dims: &[usize]) -> AlgebraSignature {
        AlgebraSignature::new(dims.to_vec()).unwrap()
    }

    fn diag2(a: Complex64, b: Complex64) -> Element {
        Element::from_matrix(CMatrix::from_diagonal(&[a, b]))
    }

    fn closure_residual(basis: &[Element]) -> f64 {
        let mut worst: f64 = 0.0;
        for x in basis {
            for y in basis {
                let p = x * y;
                let mut r = p.clone();
                for b in basis {
                    let c = b.inner(&p).unwrap();
                    r = &r - &b.scale(c);
                }
                worst = worst.max(r.frobenius_norm());
            }
        }
        worst
    }

    #[test]
    fn unit_generates_one_dimension() {
        let basis = generated_star_subalgebra(&[Element::identity(&sig(&[2, 1]))], SPAN_REL_TOL).unwrap();
        assert_eq!(basis.len(), 1);
    }

    #[test]
    fn matrix_units_generate_everything() {
        let s = sig(&[2]);
        let basis = generated_star_subalgebra(&Element::matrix_units(&s), SPAN_REL_TOL).unwrap();
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn conjugate_pair_generates_diagonals() {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let gens = [diag2(one, one), diag2(i, -i)];
        let basis = generated_star_subalgebra(&gens, SPAN_REL_TOL).unwrap();
        assert_eq!(basis.len(), 2);
        // Every basis element is diagonal.
        for b in &basis {
            assert!(b.block(0)[(0, 1)].norm() < 1e-15 && b.block(0)[(1, 0)].norm() < 1e-15);
        }
        assert!(closure_residual(&basis) < 1e-12);
    }

    #[test]
    fn single_off_diagonal_generator_needs_adjoint() {
        // E_12 alone generates all of M_2 once adjoints and the unit are added.
        let s = sig(&[2]);
        let e12 = Element::real_basis_element(&s, 1);
        let basis = generated_star_subalgebra(&[e12.clone()], SPAN_REL_TOL).unwrap();
        assert_eq!(basis.len(), 4);
        // Without the ambient unit, the same generator still reaches E_11 = E_12 E_21.
        let basis = generated_star_subalgebra_nonunital(&[e12], SPAN_REL_TOL).unwrap();
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn center_examples() {
        let full2 = generated_star_subalgebra(&Element::matrix_units(&sig(&[2])), SPAN_REL_TOL).unwrap();
        let z = center(&full2, SPAN_REL_TOL).unwrap();
        assert_eq!(z.len(), 1);
        // the center of M_2 is the scalars
        let b = z[0].block(0);
        assert!(b[(0, 1)].norm() < 1e-12 && b[(1, 0)].norm() < 1e-12);
        assert!((b[(0, 0)] - b[(1, 1)]).norm() < 1e-12);

        let comm = generated_star_subalgebra(&Element::matrix_units(&sig(&[1, 1])), SPAN_REL_TOL).unwrap();
        assert_eq!(center(&comm, SPAN_REL_TOL).unwrap().len(), 2);

        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let diag = generated_star_subalgebra(&[diag2(one, one), diag2(i, -i)], SPAN_REL_TOL).unwrap();
        assert_eq!(center(&diag, SPAN_REL_TOL).unwrap().len(), 2);
    }

    #[test]
    fn center_of_mixed_algebra() {
        // M_2 + C + M_3: center is spanned by the three block units.
        let s = sig(&[2, 1, 3]);
        let basis = generated_star_subalgebra(&Element::matrix_units(&s), SPAN_REL_TOL).unwrap();
        assert_eq!(basis.len(), s.dim());
        let z = center(&basis, SPAN_REL_TOL).unwrap();
        assert_eq!(z.len(), 3);
        for x in &z {
            for b in &basis {
                assert!(x.commutator(b).unwrap().frobenius_norm() < 1e-9);
            }
        }
    }

    #[test]
    fn center_of_rotated_commutative_algebra() {
        // U diag(C^3) U^* for a non-diagonal unitary: commutative, but the
        // commutators are pure round-off rather than exact zeros.
        let u = crate::generator::random_unitary(3, 11);
        let projections: Vec<Element> = (0..3)
            .map(|k| {
                let mut d = vec![Complex64::new(0.0, 0.0); 3];
                d[k] = Complex64::new(1.0, 0.0);
                let p = &(&u * &CMatrix::from_diagonal(&d)) * &u.adjoint();
                Element::from_matrix(p)
            })
            .collect();
        let basis = generated_star_subalgebra(&projections, SPAN_REL_TOL).unwrap();
        assert_eq!(basis.len(), 3);
        assert_eq!(center(&basis, SPAN_REL_TOL).unwrap().len(), 3);
    }
}
