//! Exact analysis of multivariate scalar subdivision schemes with a general
//! integer expanding dilation matrix.
//!
//! The crate decides zero conditions of a mask symbol, computes the
//! parametrization shift `tau` that makes linear reproduction possible,
//! finds the maximal degree of polynomial reproduction, and checks every
//! algebraic verdict against a step-wise subdivision oracle run in exact
//! rational arithmetic.
//!
//! Polynomials and grid data are generic over [`Scalar`]; the analysis
//! itself always runs over [`Rational`]. The aliases below name the
//! concrete instantiations used throughout.

pub mod analysis;
pub mod constructors;
pub mod cyclotomic;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod scalar;
pub mod subdivision;
pub mod symbol;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Integer multi-index in `Z^s`, used for mask indices and exponents.
pub type Index = Vec<i64>;

/// Exact mask symbol.
pub type Symbol = symbol::LaurentPoly<Rational>;
/// Floating-point mask symbol, used for numeric export.
pub type SymbolF64 = symbol::LaurentPoly<f64>;
pub type SymbolF32 = symbol::LaurentPoly<f32>;

/// Exact grid data for the reproduction oracle.
pub type ExactGrid = subdivision::GridData<Rational>;
/// Floating-point grid data for export.
pub type NumericGrid = subdivision::GridData<f64>;

pub use analysis::{analyze, AnalysisOptions, ReproductionReport};
pub use cyclotomic::CycloValue;
pub use lattice::{CosetReps, DilationMatrix, IntMatrix, UnityPoint};
pub use symbol::{LaurentPoly, MultiIndex};

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if num_traits::Zero::is_zero(&den) {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
