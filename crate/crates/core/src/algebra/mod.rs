//! Finite-dimensional C*-algebras `M_{n_1}(C) + ... + M_{n_k}(C)`.
//!
//! Elements carry one dense complex matrix per block. Realification maps an
//! element of complex dimension `d = sum n_i^2` to `2d` real coordinates:
//! the real parts of all entries (blocks in order, row-major within a
//! block) followed by the imaginary parts in the same order.

mod element;
mod matrix;
mod subalgebra;

pub use element::{random_element, AlgebraSignature, ComplexScalar, Element, RealVector};
pub use matrix::{CMatrix, RealMatrix};
pub use subalgebra::{center, generated_star_subalgebra, generated_star_subalgebra_nonunital, SPAN_REL_TOL};
