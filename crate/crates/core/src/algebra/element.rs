use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Shape of `M_{n_1}(C) + ... + M_{n_k}(C)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignatureDoc", into = "SignatureDoc")]
pub struct AlgebraSignature {
    block_dims: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDoc {
    blocks: Vec<usize>,
}

impl TryFrom<SignatureDoc> for AlgebraSignature {
    type Error = Error;

    fn try_from(doc: SignatureDoc) -> Result<Self> {
        Self::new(doc.blocks)
    }
}

impl From<AlgebraSignature> for SignatureDoc {
    fn from(sig: AlgebraSignature) -> Self {
        SignatureDoc {
            blocks: sig.block_dims,
        }
    }
}

impl AlgebraSignature {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidSignature("at least one block is required".into()));
        }
        if let Some(pos) = block_dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidSignature(format!("block {pos} has dimension 0")));
        }
        Ok(Self { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Complex dimension `sum n_i^2`.
    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Length of the realified coordinate vector.
    pub fn real_dim(&self) -> usize {
        2 * self.dim()
    }

    /// Signature of `M_2(A)`: every block dimension doubled.
    pub fn doubled(&self) -> Self {
        Self {
            block_dims: self.block_dims.iter().map(|n| 2 * n).collect(),
        }
    }

    pub(crate) fn ensure_eq(&self, other: &AlgebraSignature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                expected: self.clone(),
                found: other.clone(),
            })
        }
    }
}

impl fmt::Display for AlgebraSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.block_dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

/// Realified coordinates of an element: all real parts (blocks in order,
/// row-major within a block) followed by all imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct RealVector {
    pub coords: Vec<f64>,
}

/// An element of a finite-dimensional C*-algebra, one complex matrix per block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementDoc", into = "ElementDoc")]
pub struct Element {
    signature: AlgebraSignature,
    blocks: Vec<CMatrix>,
}

/// `{"algebra": {...}, "blocks": [[[[re, im], ...], ...], ...]}`: one list
/// of rows per block, each entry a `[re, im]` pair.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    algebra: AlgebraSignature,
    blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

impl TryFrom<ElementDoc> for Element {
    type Error = Error;

    fn try_from(doc: ElementDoc) -> Result<Self> {
        let sig = doc.algebra;
        if doc.blocks.len() != sig.num_blocks() {
            return Err(Error::InvalidSignature(format!(
                "expected {} blocks, found {}",
                sig.num_blocks(),
                doc.blocks.len()
            )));
        }
        let mut blocks = Vec::with_capacity(doc.blocks.len());
        for (b, (rows, &n)) in doc.blocks.into_iter().zip(sig.block_dims()).enumerate() {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidSignature(format!("block {b} is not {n}x{n}")));
            }
            let data = rows
                .into_iter()
                .flatten()
                .map(|[re, im]| Complex64::new(re, im))
                .collect();
            blocks.push(CMatrix::from_row_major(n, data).expect("shape checked"));
        }
        Element::from_blocks(sig, blocks)
    }
}

impl From<Element> for ElementDoc {
    fn from(e: Element) -> Self {
        let blocks = e
            .blocks
            .iter()
            .map(|b| {
                let n = b.dim();
                (0..n)
                    .map(|i| (0..n).map(|j| [b[(i, j)].re, b[(i, j)].im]).collect())
                    .collect()
            })
            .collect();
        ElementDoc {
            algebra: e.signature,
            blocks,
        }
    }
}

impl Element {
    /// Assembles an element from its blocks, checking shapes and finiteness.
    pub fn from_blocks(signature: AlgebraSignature, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != signature.num_blocks() {
            return Err(Error::InvalidSignature(format!(
                "expected {} blocks, found {}",
                signature.num_blocks(),
                blocks.len()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(signature.block_dims()).enumerate() {
            if b.dim() != n {
                return Err(Error::InvalidSignature(format!(
                    "block {i} has dimension {}, expected {n}",
                    b.dim()
                )));
            }
            if !b.is_finite() {
                return Err(Error::NonFinite(format!("block {i}")));
            }
        }
        Ok(Self { signature, blocks })
    }

    pub(crate) fn from_blocks_unchecked(signature: AlgebraSignature, blocks: Vec<CMatrix>) -> Self {
        debug_assert_eq!(blocks.len(), signature.num_blocks());
        Self { signature, blocks }
    }

    pub fn zero(sig: &AlgebraSignature) -> Self {
        Self {
            signature: sig.clone(),
            blocks: sig.block_dims().iter().map(|&n| CMatrix::zeros(n)).collect(),
        }
    }

    /// The unit `1_A`: an identity matrix in every block.
    pub fn identity(sig: &AlgebraSignature) -> Self {
        Self {
            signature: sig.clone(),
            blocks: sig.block_dims().iter().map(|&n| CMatrix::identity(n)).collect(),
        }
    }

    /// A scalar multiple of the unit.
    pub fn scalar(sig: &AlgebraSignature, z: ComplexScalar) -> Self {
        Self::identity(sig).scale(z)
    }

    /// The element of `C` (signature `[1]`) holding `z`.
    pub fn complex_number(z: ComplexScalar) -> Self {
        Self {
            signature: AlgebraSignature { block_dims: vec![1] },
            blocks: vec![CMatrix::from_diagonal(&[z])],
        }
    }

    /// Single-block element built from a square matrix.
    pub fn from_matrix(m: CMatrix) -> Self {
        Self {
            signature: AlgebraSignature {
                block_dims: vec![m.dim()],
            },
            blocks: vec![m],
        }
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.signature
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.signature.ensure_eq(&other.signature)?;
        Ok(self.zip_blocks(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.signature.ensure_eq(&other.signature)?;
        Ok(self.zip_blocks(other, |a, b| a - b))
    }

    /// Blockwise matrix product.
    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        self.signature.ensure_eq(&other.signature)?;
        Ok(self.zip_blocks(other, |a, b| a * b))
    }

    /// Blockwise conjugate transpose.
    pub fn adjoint(&self) -> Element {
        self.map_blocks(CMatrix::adjoint)
    }

    /// Entrywise complex conjugation (not the involution).
    pub fn conj(&self) -> Element {
        self.map_blocks(CMatrix::conj)
    }

    pub fn scale(&self, z: ComplexScalar) -> Element {
        self.map_blocks(|b| b.scale(z))
    }

    pub fn scale_real(&self, r: f64) -> Element {
        self.scale(Complex64::new(r, 0.0))
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Element) -> Result<Element> {
        self.signature.ensure_eq(&other.signature)?;
        Ok(self.zip_blocks(other, |a, b| &(a * b) - &(b * a)))
    }

    /// Frobenius norm over all blocks; the norm induced by the trace inner product.
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(CMatrix::max_abs).fold(0.0, f64::max)
    }

    /// Sum of absolute values of all entries; a cheap upper bound for the
    /// operator norm.
    pub fn entry_abs_sum(&self) -> f64 {
        self.entries().map(|z| z.norm()).sum()
    }

    /// `||self - self^*||_F`.
    pub fn asymmetry(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let n = b.dim();
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += (b[(i, j)] - b[(j, i)].conj()).norm_sqr();
                    }
                }
                s
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Trace inner product `<self, other> = sum_i tr(self_i^* other_i)`.
    pub fn inner(&self, other: &Element) -> Result<ComplexScalar> {
        self.signature.ensure_eq(&other.signature)?;
        Ok(self.entries().zip(other.entries()).map(|(a, b)| a.conj() * b).sum())
    }

    /// Iterates complex entries in the flat coordinate order.
    pub fn entries(&self) -> impl Iterator<Item = &ComplexScalar> + '_ {
        self.blocks.iter().flat_map(|b| b.as_slice().iter())
    }

    pub(crate) fn flat(&self) -> Vec<ComplexScalar> {
        self.entries().copied().collect()
    }

    pub(crate) fn from_flat(sig: &AlgebraSignature, flat: &[ComplexScalar]) -> Self {
        debug_assert_eq!(flat.len(), sig.dim());
        let mut off = 0;
        let blocks = sig
            .block_dims()
            .iter()
            .map(|&n| {
                let b = CMatrix::from_row_major(n, flat[off..off + n * n].to_vec())
                    .expect("length checked");
                off += n * n;
                b
            })
            .collect();
        Self {
            signature: sig.clone(),
            blocks,
        }
    }

    pub fn realify(&self) -> RealVector {
        let d = self.signature.dim();
        let mut coords = vec![0.0; 2 * d];
        for (k, z) in self.entries().enumerate() {
            coords[k] = z.re;
            coords[d + k] = z.im;
        }
        RealVector { coords }
    }

    pub fn unrealify(v: &RealVector, sig: &AlgebraSignature) -> Result<Element> {
        Self::unrealify_slice(&v.coords, sig)
    }

    pub fn unrealify_slice(coords: &[f64], sig: &AlgebraSignature) -> Result<Element> {
        let d = sig.dim();
        if coords.len() != 2 * d {
            return Err(Error::WrongLength {
                expected: 2 * d,
                found: coords.len(),
            });
        }
        let flat: Vec<_> = (0..d).map(|k| Complex64::new(coords[k], coords[d + k])).collect();
        Ok(Self::from_flat(sig, &flat))
    }

    /// The `k`-th realified coordinate unit: a matrix unit `E_pq` for
    /// `k < d` and `i E_pq` for `k >= d`.
    pub fn real_basis_element(sig: &AlgebraSignature, k: usize) -> Element {
        let d = sig.dim();
        assert!(k < 2 * d, "basis index out of range");
        let mut flat = vec![Complex64::new(0.0, 0.0); d];
        flat[k % d] = if k < d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        Self::from_flat(sig, &flat)
    }

    /// All `2d` elements whose realifications are the standard unit vectors.
    pub fn real_basis(sig: &AlgebraSignature) -> Vec<Element> {
        (0..sig.real_dim()).map(|k| Self::real_basis_element(sig, k)).collect()
    }

    /// Complex basis of matrix units `E_pq`, one per flat coordinate.
    pub fn matrix_units(sig: &AlgebraSignature) -> Vec<Element> {
        (0..sig.dim()).map(|k| Self::real_basis_element(sig, k)).collect()
    }

    /// Standard complex Gaussian entries (real and imaginary parts each
    /// `N(0, 1/2)`, so `E|z|^2 = 1`) drawn from `rng`.
    pub fn random_with<R: Rng + ?Sized>(sig: &AlgebraSignature, rng: &mut R) -> Element {
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let flat: Vec<_> = (0..sig.dim())
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re * scale, im * scale)
            })
            .collect();
        Self::from_flat(sig, &flat)
    }

    /// Seeded random element. The generator is ChaCha8 seeded through
    /// `seed_from_u64`, so identical seeds give bitwise-identical elements.
    pub fn random(sig: &AlgebraSignature, seed: u64) -> Element {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(sig, &mut rng)
    }

    /// For an element of a doubled signature, extracts sub-block `(r, c)` of
    /// the 2x2 block decomposition of every block.
    pub fn corner(&self, r: usize, c: usize) -> Element {
        let sig = AlgebraSignature {
            block_dims: self.signature.block_dims().iter().map(|n| n / 2).collect(),
        };
        let blocks = self
            .blocks
            .iter()
            .zip(sig.block_dims())
            .map(|(b, &n)| b.submatrix(r * n, c * n, n))
            .collect();
        Self {
            signature: sig,
            blocks,
        }
    }

    /// Assembles `[[x11, x12], [x21, x22]]` in `M_2(A)`.
    pub fn from_corners(corners: [[&Element; 2]; 2]) -> Result<Element> {
        let sig = corners[0][0].signature();
        for row in &corners {
            for x in row {
                sig.ensure_eq(x.signature())?;
            }
        }
        let doubled = sig.doubled();
        let blocks = sig
            .block_dims()
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let mut b = CMatrix::zeros(2 * n);
                for (r, row) in corners.iter().enumerate() {
                    for (c, x) in row.iter().enumerate() {
                        b.set_submatrix(r * n, c * n, x.block(i));
                    }
                }
                b
            })
            .collect();
        Ok(Self {
            signature: doubled,
            blocks,
        })
    }

    fn map_blocks(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Element {
        Self {
            signature: self.signature.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn zip_blocks(&self, other: &Element, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Element {
        Self {
            signature: self.signature.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

/// Seeded random element; see [`Element::random`].
pub fn random_element(sig: &AlgebraSignature, seed: u64) -> Element {
    Element::random(sig, seed)
}

// Operator sugar for internal arithmetic. These panic on signature mismatch;
// use the `try_*` methods for fallible arithmetic on external input.

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("signature mismatch in Element + Element")
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).expect("signature mismatch in Element - Element")
    }
}

impl Mul for &Element {
    type Output = Element;

    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("signature mismatch in Element * Element")
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.map_blocks(|b| -b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(dims: &[usize]) -> AlgebraSignature {
        AlgebraSignature::new(dims.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nilpotent() -> Element {
        Element::from_matrix(CMatrix::from_row_major(2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap())
    }

    #[test]
    fn signature_validation() {
        assert!(AlgebraSignature::new(vec![]).is_err());
        assert!(AlgebraSignature::new(vec![2, 0]).is_err());
        let s = sig(&[1, 2, 3]);
        assert_eq!(s.dim(), 14);
        assert_eq!(s.real_dim(), 28);
        assert_eq!(s.doubled().block_dims(), &[2, 4, 6]);
    }

    #[test]
    fn identity_blocks() {
        assert_eq!(Element::identity(&sig(&[1])).block(0)[(0, 0)], c(1., 0.));
        let one = Element::identity(&sig(&[1, 2]));
        assert_eq!(one.block(0), &CMatrix::identity(1));
        assert_eq!(one.block(1), &CMatrix::identity(2));
    }

    #[test]
    fn arithmetic_examples() {
        let s = sig(&[2]);
        let a = Element::random(&s, 3);
        assert_eq!(&Element::identity(&s) * &a, a);
        assert_eq!(&a + &(-&a), Element::zero(&s));
        let n = nilpotent();
        assert_eq!(&n * &n, Element::zero(&s));
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = Element::identity(&sig(&[2]));
        let b = Element::identity(&sig(&[1, 1]));
        assert!(matches!(a.try_add(&b), Err(Error::SignatureMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(Error::SignatureMismatch { .. })));
    }

    #[test]
    fn adjoint_examples() {
        let one = Element::identity(&sig(&[2]));
        assert_eq!(one.adjoint(), one);
        assert_eq!(Element::complex_number(c(0., 1.)).adjoint(), Element::complex_number(c(0., -1.)));
        let expected = Element::from_matrix(
            CMatrix::from_row_major(2, vec![c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]).unwrap(),
        );
        assert_eq!(nilpotent().adjoint(), expected);
    }

    #[test]
    fn scale_examples() {
        let a = Element::random(&sig(&[2, 1]), 1);
        assert_eq!(a.scale(c(0., 0.)), Element::zero(a.signature()));
        assert_eq!(
            Element::identity(&sig(&[1])).scale(c(0., 1.)),
            Element::complex_number(c(0., 1.))
        );
        let doubled = Element::from_matrix(
            CMatrix::from_row_major(2, vec![c(0., 0.), c(2., 0.), c(0., 0.), c(0., 0.)]).unwrap(),
        );
        assert_eq!(nilpotent().scale(c(2., 0.)), doubled);
    }

    #[test]
    fn realify_convention() {
        assert_eq!(Element::complex_number(c(0., 1.)).realify().coords, vec![0., 1.]);
        let e = Element::from_blocks(
            sig(&[1, 1]),
            vec![CMatrix::from_diagonal(&[c(1., 0.)]), CMatrix::from_diagonal(&[c(0., 1.)])],
        )
        .unwrap();
        assert_eq!(e.realify().coords, vec![1., 0., 0., 1.]);
    }

    #[test]
    fn unrealify_rejects_wrong_length() {
        let err = Element::unrealify(&RealVector { coords: vec![0.0; 3] }, &sig(&[1])).unwrap_err();
        assert_eq!(err, Error::WrongLength { expected: 2, found: 3 });
    }

    #[test]
    fn real_basis_is_standard() {
        let s = sig(&[2, 1]);
        for (k, e) in Element::real_basis(&s).iter().enumerate() {
            let v = e.realify().coords;
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, if j == k { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn random_is_deterministic_and_adjoint_sum_is_selfadjoint() {
        let s = sig(&[2, 3]);
        let a = Element::random(&s, 7);
        let b = Element::random(&s, 7);
        assert_eq!(a.realify().coords, b.realify().coords);
        let h = &a.adjoint() + &a;
        assert_eq!(h.asymmetry(), 0.0);
    }

    #[test]
    fn random_entry_magnitude_matches_gaussian_expectation() {
        // For a standard complex Gaussian, |z| is Rayleigh with mean sqrt(pi)/2.
        let s = sig(&[1]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 10_000;
        let mean = (0..draws)
            .map(|_| Element::random_with(&s, &mut rng).block(0)[(0, 0)].norm())
            .sum::<f64>()
            / draws as f64;
        let expected = std::f64::consts::PI.sqrt() / 2.0;
        assert!((mean - expected).abs() <= 0.1 * expected, "mean {mean}");
    }

    #[test]
    fn corners_round_trip() {
        let s = sig(&[1, 2]);
        let xs: Vec<_> = (0..4).map(|k| Element::random(&s, k)).collect();
        let big = Element::from_corners([[&xs[0], &xs[1]], [&xs[2], &xs[3]]]).unwrap();
        assert_eq!(big.signature(), &s.doubled());
        assert_eq!(big.corner(0, 0), xs[0]);
        assert_eq!(big.corner(0, 1), xs[1]);
        assert_eq!(big.corner(1, 0), xs[2]);
        assert_eq!(big.corner(1, 1), xs[3]);
    }

    #[test]
    fn serde_element_round_trip_and_validation() {
        let a = Element::random(&sig(&[1, 2]), 5);
        let text = serde_json::to_string(&a).unwrap();
        let back: Element = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        let i: Element = serde_json::from_str(r#"{"algebra":{"blocks":[1]},"blocks":[[[[0,1]]]]}"#).unwrap();
        assert_eq!(i, Element::complex_number(c(0., 1.)));
        for bad in [
            r#"{"algebra":{"blocks":[2]},"blocks":[[[[0,1]]]]}"#,
            r#"{"algebra":{"blocks":[1]},"blocks":[]}"#,
            r#"{"algebra":{"blocks":[1]},"blocks":[[[[0,1,2]]]]}"#,
            r#"{"algebra":{"blocks":[1]},"blocks":[[[[0,1]]]],"extra":1}"#,
        ] {
            assert!(serde_json::from_str::<Element>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn serde_signature_validates() {
        let s: AlgebraSignature = serde_json::from_str(r#"{"blocks":[1,2]}"#).unwrap();
        assert_eq!(s.block_dims(), &[1, 2]);
        assert!(serde_json::from_str::<AlgebraSignature>(r#"{"blocks":[]}"#).is_err());
        assert!(serde_json::from_str::<AlgebraSignature>(r#"{"blocks":[0]}"#).is_err());
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"blocks":[1,2]}"#);
    }
}
