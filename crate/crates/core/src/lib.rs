//! Numerical checks for ring *-homomorphisms between finite-dimensional
//! C*-algebras `M_{n_1}(C) + ... + M_{n_k}(C)`.
//!
//! Maps are handled as real-linear matrices on realified coordinates, so
//! complex-linear, conjugate-linear and mixed maps are treated uniformly.

pub mod algebra;
pub mod decomposition;
pub mod doc;
pub mod error;
pub mod generator;
pub mod hom;
pub mod linalg;
pub mod spectral;

pub use algebra::{AlgebraSignature, CMatrix, Element, RealMatrix, RealVector};
pub use decomposition::{classify, decompose, decompose_with, Classification, DecomposeOptions, Decomposition};
pub use error::{Error, Result};
pub use hom::{compile, verify, RealLinearMap, StructuredHom, VerificationReport};
pub use generator::{fuzz_theorems, mutate_invalid, random_hom, random_unitary, FuzzReport, MutationKind};
