//! Candidate ring *-homomorphisms between finite-dimensional C*-algebras.
//!
//! A candidate is stored as a real matrix acting on realified coordinates
//! ([`RealLinearMap`]). Additivity is therefore structural, and rational or
//! real scaling become properties that [`verify`] measures rather than
//! assumes. Complex-linear, conjugate-linear and mixed maps all fit.

mod kernel;
mod structured;
mod verify;

pub use kernel::{
    isometry_check, kernel, kernel_ideal_residuals, restrict_codomain, IdealResiduals, IsometryReport, Kernel,
    Restriction, INJECTIVITY_TOL,
};
pub use structured::{compile, StructuredHom, UNITARY_TOL};
pub use verify::{
    check_contractivity, contractivity_margin, verify, verify_with_unit, VerificationReport, IRRATIONAL_SCALARS,
    RATIONAL_SCALARS,
};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSignature, Element, RealMatrix};
use crate::error::{Error, Result};

/// Default tolerance for every law check.
pub const DEFAULT_TOL: f64 = 1e-8;

/// An R-linear map `A -> B` as a `2 d_B x 2 d_A` real matrix on realified
/// coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct RealLinearMap {
    domain: AlgebraSignature,
    codomain: AlgebraSignature,
    matrix: RealMatrix,
}

/// Serialized form of a map; mirrors the `"kind": "matrix"` document.
#[derive(Serialize, Deserialize)]
pub(crate) struct MatrixDoc {
    pub domain: AlgebraSignature,
    pub codomain: AlgebraSignature,
    pub rows: Vec<Vec<f64>>,
}

impl TryFrom<MatrixDoc> for RealLinearMap {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        let rows = doc.rows.len();
        let cols = doc.domain.real_dim();
        if let Some((i, r)) = doc.rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::InvalidArgument(format!(
                "row {i} has length {}, expected {cols}",
                r.len()
            )));
        }
        let data = doc.rows.into_iter().flatten().collect();
        let matrix = RealMatrix::from_row_major(rows, cols, data).expect("row lengths checked");
        Self::new(doc.domain, doc.codomain, matrix)
    }
}

impl From<RealLinearMap> for MatrixDoc {
    fn from(m: RealLinearMap) -> Self {
        let rows = (0..m.matrix.rows()).map(|i| m.matrix.row(i).to_vec()).collect();
        MatrixDoc {
            domain: m.domain,
            codomain: m.codomain,
            rows,
        }
    }
}

impl RealLinearMap {
    pub fn new(domain: AlgebraSignature, codomain: AlgebraSignature, matrix: RealMatrix) -> Result<Self> {
        let shape = (codomain.real_dim(), domain.real_dim());
        if (matrix.rows(), matrix.cols()) != shape {
            return Err(Error::InvalidArgument(format!(
                "map matrix is {}x{}, signatures require {}x{}",
                matrix.rows(),
                matrix.cols(),
                shape.0,
                shape.1
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite("map matrix".into()));
        }
        Ok(Self {
            domain,
            codomain,
            matrix,
        })
    }

    /// Tabulates an R-linear function on the realified basis of `domain`.
    pub fn from_fn(
        domain: &AlgebraSignature,
        codomain: &AlgebraSignature,
        mut f: impl FnMut(&Element) -> Element,
    ) -> Self {
        let columns: Vec<Vec<f64>> = Element::real_basis(domain)
            .iter()
            .map(|e| {
                let img = f(e);
                assert_eq!(img.signature(), codomain, "function image has the wrong signature");
                img.realify().coords
            })
            .collect();
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: RealMatrix::from_columns(codomain.real_dim(), &columns),
        }
    }

    pub fn identity(sig: &AlgebraSignature) -> Self {
        Self {
            domain: sig.clone(),
            codomain: sig.clone(),
            matrix: RealMatrix::identity(sig.real_dim()),
        }
    }

    pub fn zero(domain: &AlgebraSignature, codomain: &AlgebraSignature) -> Self {
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: RealMatrix::zeros(codomain.real_dim(), domain.real_dim()),
        }
    }

    pub fn domain(&self) -> &AlgebraSignature {
        &self.domain
    }

    pub fn codomain(&self) -> &AlgebraSignature {
        &self.codomain
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    /// `unrealify(matrix * realify(a))`.
    pub fn apply(&self, a: &Element) -> Result<Element> {
        self.domain.ensure_eq(a.signature())?;
        Ok(self.image(a))
    }

    /// [`apply`](Self::apply) for inputs already known to match the domain.
    pub(crate) fn image(&self, a: &Element) -> Element {
        let x = a.realify().coords;
        let cols = self.matrix.cols();
        let mut out = vec![0.0; self.matrix.rows()];
        let nz: Vec<(usize, f64)> = x.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.matrix.as_slice()[i * cols..(i + 1) * cols];
            *o = nz.iter().map(|&(j, v)| row[j] * v).sum();
        }
        Element::unrealify_slice(&out, &self.codomain).expect("shape checked at construction")
    }

    /// Image of the `k`-th realified basis element.
    pub fn basis_image(&self, k: usize) -> Element {
        Element::unrealify_slice(&self.matrix.column(k), &self.codomain).expect("shape checked at construction")
    }

    /// `a -> left * phi(a)`.
    pub fn left_multiplied(&self, left: &Element) -> Result<Self> {
        self.codomain.ensure_eq(left.signature())?;
        Ok(Self::from_fn(&self.domain, &self.codomain, |e| left * &self.image(e)))
    }

    /// Matrix of `other` followed by `self`.
    pub fn after(&self, other: &RealLinearMap) -> Result<Self> {
        self.domain.ensure_eq(&other.codomain)?;
        Ok(Self {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.matmul(&other.matrix),
        })
    }

    /// The amplification `phi_2 : M_2(A) -> M_2(B)` applying `phi` to each of
    /// the four corners.
    pub fn amplify2(&self) -> Self {
        let dom2 = self.domain.doubled();
        let cod2 = self.codomain.doubled();
        Self::from_fn(&dom2, &cod2, |x| {
            let c = |r, s| self.image(&x.corner(r, s));
            let (x00, x01, x10, x11) = (c(0, 0), c(0, 1), c(1, 0), c(1, 1));
            Element::from_corners([[&x00, &x01], [&x10, &x11]]).expect("corner images share a signature")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dilation, is_positive};
    use num_complex::Complex64;

    fn sig(dims: &[usize]) -> AlgebraSignature {
        AlgebraSignature::new(dims.to_vec()).unwrap()
    }

    #[test]
    fn identity_and_zero_maps() {
        let s = sig(&[2, 1]);
        let a = Element::random(&s, 1);
        assert_eq!(RealLinearMap::identity(&s).apply(&a).unwrap(), a);
        assert_eq!(RealLinearMap::zero(&s, &sig(&[3])).apply(&a).unwrap(), Element::zero(&sig(&[3])));
    }

    #[test]
    fn apply_checks_signature() {
        let m = RealLinearMap::identity(&sig(&[2]));
        assert!(matches!(
            m.apply(&Element::identity(&sig(&[1]))),
            Err(Error::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn conjugation_on_c() {
        let m = RealLinearMap::new(
            sig(&[1]),
            sig(&[1]),
            RealMatrix::from_row_major(2, 2, vec![1., 0., 0., -1.]).unwrap(),
        )
        .unwrap();
        let z = Element::complex_number(Complex64::new(2.0, 3.0));
        assert_eq!(m.apply(&z).unwrap(), Element::complex_number(Complex64::new(2.0, -3.0)));
    }

    #[test]
    fn shape_and_finiteness_validation() {
        let bad = RealLinearMap::new(sig(&[1]), sig(&[1]), RealMatrix::zeros(2, 3));
        assert!(bad.is_err());
        let nan = RealLinearMap::new(
            sig(&[1]),
            sig(&[1]),
            RealMatrix::from_row_major(2, 2, vec![f64::NAN, 0., 0., 1.]).unwrap(),
        );
        assert!(matches!(nan, Err(Error::NonFinite(_))));
    }

    #[test]
    fn amplify_identity_is_identity() {
        let m = RealLinearMap::identity(&sig(&[1])).amplify2();
        assert_eq!(m, RealLinearMap::identity(&sig(&[2])));
    }

    #[test]
    fn amplified_dilation_has_expected_corners() {
        let s = sig(&[2]);
        let conj = RealLinearMap::from_fn(&s, &s, Element::conj);
        let a = Element::random(&s, 3);
        let k = 2.5;
        let image = conj.amplify2().apply(&dilation(&a, k)).unwrap();
        let expected = dilation(&conj.apply(&a).unwrap(), k);
        assert!((&image - &expected).max_abs() < 1e-15);
        // conjugation preserves norms, so positivity of the dilation is preserved too
        assert_eq!(is_positive(&dilation(&a, k), 1e-10), is_positive(&image, 1e-10));
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let m = RealLinearMap::from_fn(&sig(&[1]), &sig(&[2]), |z| {
            let v = z.block(0)[(0, 0)];
            Element::from_matrix(crate::algebra::CMatrix::from_diagonal(&[v, v.conj()]))
        });
        let text = serde_json::to_string(&m).unwrap();
        let back: RealLinearMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"domain":{"blocks":[1]},"codomain":{"blocks":[1]},"rows":[[1,0],[0]]}"#;
        assert!(serde_json::from_str::<RealLinearMap>(bad).is_err());
        let bad_shape = r#"{"domain":{"blocks":[1]},"codomain":{"blocks":[1]},"rows":[[1,0]]}"#;
        assert!(serde_json::from_str::<RealLinearMap>(bad_shape).is_err());
    }
}
