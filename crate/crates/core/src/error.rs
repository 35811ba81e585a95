use thiserror::Error;

use crate::algebra::AlgebraSignature;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch {
        expected: AlgebraSignature,
        found: AlgebraSignature,
    },

    #[error("wrong vector length: expected {expected}, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("non-finite entry at {0}")]
    NonFinite(String),

    #[error("element is not selfadjoint (asymmetry {asymmetry:e})")]
    NotSelfadjoint { asymmetry: f64 },

    #[error("element is not positive (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("malformed homomorphism tree: {0}")]
    MalformedTree(String),

    #[error("malformed document: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("map failed verification: {0}")]
    Unverified(String),

    #[error("decomposition residual `{name}` = {value:e} exceeds tolerance {tol:e}")]
    DecompositionResidual { name: &'static str, value: f64, tol: f64 },
}
