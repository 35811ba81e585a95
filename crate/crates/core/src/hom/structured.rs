use std::fmt;

use serde::{Deserialize, Serialize};

use super::RealLinearMap;
use crate::algebra::{AlgebraSignature, CMatrix, Element};
use crate::error::{Error, Result};
use crate::spectral::operator_norm;

/// Largest `||U^* U - 1||` accepted for a unitary conjugation node.
pub const UNITARY_TOL: f64 = 1e-10;

/// A homomorphism described by constructors rather than by a matrix.
///
/// Every unital *-homomorphism between finite-dimensional C*-algebras is,
/// up to unitary equivalence, a block embedding with multiplicities; adding
/// entrywise conjugation on individual branches reaches the conjugate-linear
/// and mixed ring *-homomorphisms as well.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum StructuredHom {
    /// `a -> a` on the given algebra.
    Identity { algebra: AlgebraSignature },
    /// Codomain block `j` is block-diagonal, holding `multiplicities[j][i]`
    /// copies of domain block `i` (in domain order), zero-padded if the
    /// copies do not fill the block.
    BlockEmbedding {
        domain: AlgebraSignature,
        codomain: AlgebraSignature,
        multiplicities: Vec<Vec<usize>>,
    },
    /// `a -> U a U^*` for a unitary `U`.
    UnitaryConjugation { unitary: Element },
    /// `a -> conj(a)`, entry by entry.
    EntrywiseConjugation { algebra: AlgebraSignature },
    /// Branches sharing a domain; their codomains are concatenated.
    DirectSum { branches: Vec<StructuredHom> },
    /// Stages applied left to right.
    Composition { stages: Vec<StructuredHom> },
}

impl StructuredHom {
    pub fn identity(sig: &AlgebraSignature) -> Self {
        Self::Identity { algebra: sig.clone() }
    }

    pub fn conjugation(sig: &AlgebraSignature) -> Self {
        Self::EntrywiseConjugation { algebra: sig.clone() }
    }

    /// Checks the tree and returns its `(domain, codomain)`.
    pub fn signatures(&self) -> Result<(AlgebraSignature, AlgebraSignature)> {
        match self {
            Self::Identity { algebra } | Self::EntrywiseConjugation { algebra } => {
                Ok((algebra.clone(), algebra.clone()))
            }
            Self::BlockEmbedding {
                domain,
                codomain,
                multiplicities,
            } => {
                if multiplicities.len() != codomain.num_blocks() {
                    return Err(Error::MalformedTree(format!(
                        "block embedding has {} multiplicity rows for {} codomain blocks",
                        multiplicities.len(),
                        codomain.num_blocks()
                    )));
                }
                for (j, (row, &size)) in multiplicities.iter().zip(codomain.block_dims()).enumerate() {
                    if row.len() != domain.num_blocks() {
                        return Err(Error::MalformedTree(format!(
                            "multiplicity row {j} has {} entries for {} domain blocks",
                            row.len(),
                            domain.num_blocks()
                        )));
                    }
                    let filled: usize = row.iter().zip(domain.block_dims()).map(|(m, n)| m * n).sum();
                    if filled > size {
                        return Err(Error::MalformedTree(format!(
                            "codomain block {j} of size {size} cannot hold {filled} rows of copies"
                        )));
                    }
                }
                Ok((domain.clone(), codomain.clone()))
            }
            Self::UnitaryConjugation { unitary } => {
                let sig = unitary.signature();
                let residual = operator_norm(&(&(&unitary.adjoint() * unitary) - &Element::identity(sig)));
                if !(residual <= UNITARY_TOL) {
                    return Err(Error::NotUnitary { residual });
                }
                Ok((sig.clone(), sig.clone()))
            }
            Self::DirectSum { branches } => {
                let Some(first) = branches.first() else {
                    return Err(Error::MalformedTree("direct sum without branches".into()));
                };
                let (domain, _) = first.signatures()?;
                let mut blocks = Vec::new();
                for (k, b) in branches.iter().enumerate() {
                    let (d, c) = b.signatures()?;
                    if d != domain {
                        return Err(Error::MalformedTree(format!(
                            "branch {k} has domain {d}, expected {domain}"
                        )));
                    }
                    blocks.extend_from_slice(c.block_dims());
                }
                Ok((domain, AlgebraSignature::new(blocks)?))
            }
            Self::Composition { stages } => {
                let Some(first) = stages.first() else {
                    return Err(Error::MalformedTree("composition without stages".into()));
                };
                let (domain, mut current) = first.signatures()?;
                for (k, s) in stages.iter().enumerate().skip(1) {
                    let (d, c) = s.signatures()?;
                    if d != current {
                        return Err(Error::MalformedTree(format!(
                            "stage {k} expects {d} but receives {current}"
                        )));
                    }
                    current = c;
                }
                Ok((domain, current))
            }
        }
    }

    /// Evaluates the tree on an element. The tree must already be
    /// well-formed (see [`signatures`](Self::signatures)).
    fn eval(&self, a: &Element) -> Element {
        match self {
            Self::Identity { .. } => a.clone(),
            Self::EntrywiseConjugation { .. } => a.conj(),
            Self::UnitaryConjugation { unitary } => &(unitary * a) * &unitary.adjoint(),
            Self::BlockEmbedding {
                domain,
                codomain,
                multiplicities,
            } => {
                let blocks = multiplicities
                    .iter()
                    .zip(codomain.block_dims())
                    .map(|(row, &size)| {
                        let mut b = CMatrix::zeros(size);
                        let mut at = 0;
                        for (i, &m) in row.iter().enumerate() {
                            for _ in 0..m {
                                b.set_submatrix(at, at, a.block(i));
                                at += domain.block_dims()[i];
                            }
                        }
                        b
                    })
                    .collect();
                Element::from_blocks_unchecked(codomain.clone(), blocks)
            }
            Self::DirectSum { branches } => {
                let mut blocks = Vec::new();
                for b in branches {
                    blocks.extend(b.eval(a).into_blocks());
                }
                let sig = AlgebraSignature::new(blocks.iter().map(CMatrix::dim).collect())
                    .expect("branch codomains are valid");
                Element::from_blocks_unchecked(sig, blocks)
            }
            Self::Composition { stages } => stages.iter().fold(a.clone(), |x, s| s.eval(&x)),
        }
    }

    /// Evaluates the tree on an element of its domain.
    pub fn apply(&self, a: &Element) -> Result<Element> {
        let (domain, _) = self.signatures()?;
        domain.ensure_eq(a.signature())?;
        Ok(self.eval(a))
    }
}

/// Lowers a structured homomorphism to its realified matrix.
pub fn compile(h: &StructuredHom) -> Result<RealLinearMap> {
    let (domain, codomain) = h.signatures()?;
    Ok(RealLinearMap::from_fn(&domain, &codomain, |e| h.eval(e)))
}

impl fmt::Display for StructuredHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity { algebra } => write!(f, "id{algebra}"),
            Self::EntrywiseConjugation { algebra } => write!(f, "conj{algebra}"),
            Self::UnitaryConjugation { unitary } => write!(f, "ad(U){}", unitary.signature()),
            Self::BlockEmbedding {
                domain,
                codomain,
                multiplicities,
            } => write!(f, "embed{domain}->{codomain}{multiplicities:?}"),
            Self::DirectSum { branches } => {
                write!(f, "sum(")?;
                for (k, b) in branches.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{b}")?;
                }
                write!(f, ")")
            }
            Self::Composition { stages } => {
                write!(f, "compose(")?;
                for (k, s) in stages.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ; ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}
