//! Exact arithmetic in the cyclotomic field `Q(zeta_N)`.
//!
//! Values are kept in the redundant basis `1, zeta, ..., zeta^{N-1}`; the
//! zero test reduces modulo the `N`-th cyclotomic polynomial.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::Rational;

/// `Phi_N` with integer coefficients in ascending order, computed as
/// `(x^N - 1) / prod_{d | N, d < N} Phi_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial order must be positive");
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, dc) in den.iter().enumerate() {
            rem[k + i] -= &c * dc;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division is exact");
    quot
}

/// Element `sum_t c_t zeta_N^t` of `Q(zeta_N)`, `zeta_N = exp(2 pi i / N)`.
#[derive(Clone, Debug)]
pub struct CycloValue {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CycloValue {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        CycloValue {
            order,
            coeffs: vec![Rational::zero(); order as usize],
        }
    }

    /// A rational embedded in `Q(zeta_1) = Q`.
    pub fn from_rational(r: Rational) -> Self {
        CycloValue {
            order: 1,
            coeffs: vec![r],
        }
    }

    /// `zeta_N^t`.
    pub fn root(order: u64, t: u64) -> Self {
        let mut v = CycloValue::zero(order);
        v.coeffs[(t % order) as usize] = Rational::one();
        v
    }

    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len() as u64, order, "need exactly N coefficients");
        CycloValue { order, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Adds `c * zeta_N^t`.
    pub fn add_term(&mut self, t: u64, c: &Rational) {
        self.coeffs[(t % self.order) as usize] += c;
    }

    /// Re-expresses the value in `Q(zeta_{new_order})`; `new_order` must be a
    /// multiple of the current order.
    pub fn lift(&self, new_order: u64) -> Self {
        assert_eq!(new_order % self.order, 0, "lift target must be a multiple");
        let step = (new_order / self.order) as usize;
        let mut out = CycloValue::zero(new_order);
        for (t, c) in self.coeffs.iter().enumerate() {
            out.coeffs[t * step] = c.clone();
        }
        out
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let n = self.order.lcm(&other.order);
        (self.lift(n), other.lift(n))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Remainder of `sum c_t x^t` modulo `Phi_N`, of length `phi(N)`.
    /// Its coefficients are the coordinates in the power basis of `Q(zeta_N)`.
    pub fn reduced(&self) -> Vec<Rational> {
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for k in (deg..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            // Phi_N is monic
            for (i, pc) in phi.iter().enumerate() {
                rem[k - deg + i] -= &c * pc;
            }
        }
        rem.truncate(deg);
        rem
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Zero::is_zero)
    }

    /// `Some(r)` when the value is the rational `r`.
    pub fn as_rational(&self) -> Option<Rational> {
        let red = self.reduced();
        if red.iter().skip(1).all(Zero::is_zero) {
            Some(red.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| {
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), 2.0 * std::f64::consts::PI * t as f64 / n)
            })
            .sum()
    }
}

impl PartialEq for CycloValue {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Add for &CycloValue {
    type Output = CycloValue;

    fn add(self, rhs: &CycloValue) -> CycloValue {
        let (mut a, b) = self.unify(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for &CycloValue {
    type Output = CycloValue;

    fn sub(self, rhs: &CycloValue) -> CycloValue {
        self + &(-rhs)
    }
}

impl Neg for &CycloValue {
    type Output = CycloValue;

    fn neg(self) -> CycloValue {
        self.scale(&-Rational::one())
    }
}

impl Mul for &CycloValue {
    type Output = CycloValue;

    fn mul(self, rhs: &CycloValue) -> CycloValue {
        let (a, b) = self.unify(rhs);
        let n = a.order as usize;
        let mut out = CycloValue::zero(a.order);
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out.coeffs[(i + j) % n] += x * y;
            }
        }
        out
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", crate::format_rational(&r));
        }
        let terms: Vec<String> = self
            .reduced()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| match t {
                0 => crate::format_rational(c),
                1 => format!("{}*z{}", crate::format_rational(c), self.order),
                _ => format!("{}*z{}^{}", crate::format_rational(c), self.order, t),
            })
            .collect();
        let z = self.to_complex();
        write!(f, "{} (z{} = exp(2pi i/{}); ~ {:.6}{:+.6}i)", terms.join(" + "), self.order, self.order, z.re, z.im)
    }
}
