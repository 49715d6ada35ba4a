//! Coefficient types for polynomials and grid data.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::Rational;

/// A coefficient field usable for masks and subdivision data.
///
/// `Rational` gives exact arithmetic; `f64`/`f32` are used for numeric export.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether equality comparisons are exact.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(r: &Rational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn conversions() {
        assert_eq!(f64::from_rational(&ratio(1, 4)), 0.25);
        assert_eq!(f32::from_rational(&ratio(-3, 2)), -1.5);
        assert_eq!(Rational::from_i64(5), ratio(5, 1));
        assert_eq!(Scalar::to_f64(&ratio(1, 8)), 0.125);
    }
}
