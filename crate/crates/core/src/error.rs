use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square or has inconsistent rows")]
    NotSquare,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("affine weights must sum to 1, got {0}")]
    AffineWeightsInvalid(String),
    #[error("{0:?} is congruent to an earlier coset representative")]
    NotARepresentative(Vec<i64>),
    #[error("symbol is not normalized: a(1) = {value}, expected m = {m}")]
    NotNormalized { value: Rational, m: u64 },
    #[error("dilation matrix must have |det| >= 2, got det = {0}")]
    DegenerateDilation(i64),
    #[error("matrix is not expanding (minimal eigenvalue modulus {0})")]
    NotExpanding(f64),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("linear conditions are infeasible")]
    Infeasible,
    #[error("unknown builtin scheme {0:?}")]
    UnknownName(String),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
