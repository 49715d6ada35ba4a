//! Sparse multivariate Laurent polynomials: masks and their symbols.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::cyclotomic::CycloValue;
use crate::lattice::{DilationMatrix, IntMatrix, UnityPoint};
use crate::{Error, Index, Rational, Result, Scalar};

/// Multi-index `j` in `N_0^s`, the order of a partial derivative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(s: usize) -> Self {
        MultiIndex(vec![0; s])
    }

    /// The `l`-th unit vector `u_l`.
    pub fn unit(s: usize, l: usize) -> Self {
        let mut j = vec![0; s];
        j[l] = 1;
        MultiIndex(j)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|j|`
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All `j` with `|j| = d`, in increasing lexicographic order.
    pub fn of_order(s: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(s: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == s {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in 0..=d {
                prefix.push(first);
                rec(s, d - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if s == 0 {
            if d == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(s, d, &mut Vec::with_capacity(s), &mut out);
        out
    }

    /// All `j` with `|j| <= d`, grouped by order.
    pub fn up_to_order(s: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|k| MultiIndex::of_order(s, k)).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `q_j(x) = prod_i prod_{l < j_i} (x_i - l)`, with `q_0 = 1`.
pub fn falling_factorial<T: Scalar>(j: &MultiIndex, x: &[T]) -> T {
    let mut acc = T::one();
    for (&ji, xi) in j.0.iter().zip(x) {
        for l in 0..ji {
            acc = acc * (xi.clone() - T::from_i64(l as i64));
        }
    }
    acc
}

/// Integer-argument falling factorial, exact in `i128`.
pub fn falling_factorial_int(j: &MultiIndex, x: &[i64]) -> i128 {
    let mut acc: i128 = 1;
    for (&ji, &xi) in j.0.iter().zip(x) {
        for l in 0..ji as i64 {
            acc = acc.checked_mul((xi - l) as i128).expect("falling factorial overflow");
            if acc == 0 {
                return 0;
            }
        }
    }
    acc
}

/// Finitely supported map `Z^s -> T` with no stored zeros; represents both a
/// mask `{a_alpha}` and its symbol `a(z) = sum a_alpha z^alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<T> {
    dim: usize,
    terms: BTreeMap<Index, T>,
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn monomial(exponent: Index, c: T) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    /// Builds from `(index, coefficient)` pairs; repeated indices are summed.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Index, T)>,
    {
        let mut p = Self::zero(dim);
        for (idx, c) in terms {
            if idx.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: idx.len(),
                });
            }
            p.add_term(idx, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, idx: Index, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: &[i64]) -> Option<&T> {
        self.terms.get(idx)
    }

    /// Terms in lexicographic index order.
    pub fn terms(&self) -> impl Iterator<Item = (&Index, &T)> {
        self.terms.iter()
    }

    /// Componentwise `(min, max)` of the support.
    pub fn support_box(&self) -> Option<(Index, Index)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for k in it {
            for i in 0..self.dim {
                lo[i] = lo[i].min(k[i]);
                hi[i] = hi[i].max(k[i]);
            }
        }
        Some((lo, hi))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-T::one()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                out.add_term(k, va.clone() * vb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(self.dim, T::one()), |acc, _| {
            acc.try_mul(self).expect("same dimension")
        })
    }

    /// `sum_i lambda_i a_i` with `sum_i lambda_i = 1` required exactly.
    pub fn affine_combine(parts: &[(T, &Self)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::AffineWeightsInvalid("0 (no symbols)".into()))?;
        let total = parts.iter().fold(T::zero(), |acc, (l, _)| acc + l.clone());
        if total != T::one() {
            return Err(Error::AffineWeightsInvalid(format!("{total:?}")));
        }
        let mut out = Self::zero(first.1.dim);
        for (l, a) in parts {
            out = out.try_add(&a.scale(l))?;
        }
        Ok(out)
    }

    /// `z^alpha -> z^{B alpha}` for a nonsingular integer matrix `B`.
    pub fn substitute_monomial(&self, b: &IntMatrix) -> Result<Self> {
        if b.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: b.dim(),
            });
        }
        if b.determinant() == 0 {
            return Err(Error::SingularMatrix);
        }
        Self::from_terms(self.dim, self.terms.iter().map(|(k, v)| (b.mul_vec(k), v.clone())))
    }

    /// Restriction to the indices congruent to `e` modulo `M Z^s`, kept at
    /// their original exponents.
    pub fn submask_symbol(&self, e: &[i64], m: &DilationMatrix) -> Self {
        let lat = m.lattice();
        LaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| lat.congruent(k, e))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Submask symbols for a list of pairwise non-congruent representatives.
    pub fn submask_decomposition(&self, reps: &[Index], m: &DilationMatrix) -> Result<Vec<Self>> {
        for (i, e) in reps.iter().enumerate() {
            if reps[..i].iter().any(|f| m.lattice().congruent(e, f)) {
                return Err(Error::NotARepresentative(e.clone()));
            }
        }
        Ok(reps.iter().map(|e| self.submask_symbol(e, m)).collect())
    }

    /// `D^j a` by the monomial rule `D^j z^alpha = q_j(alpha) z^{alpha - j}`.
    pub fn formal_derivative(&self, j: &MultiIndex) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, v) in &self.terms {
            let q = falling_factorial_int(j, k);
            if q == 0 {
                continue;
            }
            let shifted = k.iter().zip(&j.0).map(|(a, &b)| a - b as i64).collect();
            out.add_term(shifted, v.clone() * T::from_i64(i64::try_from(q).expect("coefficient overflow")));
        }
        out
    }

    /// `(D^j a)(1)`, computed twice: by differentiating then summing, and by
    /// the direct sum `sum_alpha a_alpha q_j(alpha)`. Panics if they differ
    /// (only meaningful for exact scalars).
    pub fn eval_deriv_at_one(&self, j: &MultiIndex) -> T {
        let direct = self.terms.iter().fold(T::zero(), |acc, (k, v)| {
            acc + v.clone() * T::from_i64(falling_factorial_int(j, k) as i64)
        });
        if T::EXACT {
            let via_derivative = self.formal_derivative(j).eval_at_one();
            assert_eq!(direct, via_derivative, "derivative evaluation self-check failed at j = {j}");
        }
        direct
    }

    /// `a(1)`, the sum of the coefficients.
    pub fn eval_at_one(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LaurentPoly<U> {
        LaurentPoly::from_terms(self.dim, self.terms.iter().map(|(k, v)| (k.clone(), f(v))))
            .expect("same dimension")
    }
}

impl LaurentPoly<Rational> {
    pub fn to_scalar<U: Scalar>(&self) -> LaurentPoly<U> {
        self.map(U::from_rational)
    }

    /// `(D^j a)(p)` with `p` a root-of-unity point, as an exact cyclotomic
    /// value; cross-checked against differentiating first.
    pub fn eval_deriv_at_point(&self, j: &MultiIndex, p: &UnityPoint) -> CycloValue {
        let direct = self.eval_deriv_direct(j, p);
        let via_derivative = self.formal_derivative(j).eval_deriv_direct(&MultiIndex::zero(self.dim), p);
        assert_eq!(direct, via_derivative, "derivative evaluation self-check failed at j = {j}, point {p}");
        direct
    }

    /// `sum_alpha a_alpha q_j(alpha) p^{alpha - j}`.
    fn eval_deriv_direct(&self, j: &MultiIndex, p: &UnityPoint) -> CycloValue {
        let (order, n) = p.integer_exponents();
        let big_n = order as i128;
        let mut out = CycloValue::zero(order);
        for (k, v) in &self.terms {
            let q = falling_factorial_int(j, k);
            if q == 0 {
                continue;
            }
            let t: i128 = k
                .iter()
                .zip(&j.0)
                .zip(&n)
                .map(|((&a, &ji), &ni)| ni as i128 * (a as i128 - ji as i128))
                .sum();
            let coeff = v * Rational::from_integer(q.into());
            out.add_term(t.rem_euclid(big_n) as u64, &coeff);
        }
        out
    }

    /// `(D^j a)` at either `1` or a root-of-unity point.
    pub fn eval_deriv_at(&self, j: &MultiIndex, p: EvalPoint<'_>) -> DerivValue {
        match p {
            EvalPoint::One => DerivValue::Rational(self.eval_deriv_at_one(j)),
            EvalPoint::Unity(u) if u.is_one() => DerivValue::Rational(self.eval_deriv_at_one(j)),
            EvalPoint::Unity(u) => DerivValue::Cyclo(self.eval_deriv_at_point(j, u)),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum EvalPoint<'a> {
    One,
    Unity(&'a UnityPoint),
}

#[derive(Clone, Debug, PartialEq)]
pub enum DerivValue {
    Rational(Rational),
    Cyclo(CycloValue),
}

impl DerivValue {
    pub fn is_zero(&self) -> bool {
        match self {
            DerivValue::Rational(r) => r.is_zero(),
            DerivValue::Cyclo(c) => c.is_zero(),
        }
    }
}

impl fmt::Display for DerivValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivValue::Rational(r) => write!(f, "{}", crate::format_rational(r)),
            DerivValue::Cyclo(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for LaurentPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let mono: Vec<String> = k
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, e) })
                    .collect();
                if mono.is_empty() {
                    crate::format_rational(v)
                } else if v.is_one() {
                    mono.join("*")
                } else {
                    format!("{}*{}", crate::format_rational(v), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
