//! Integer matrix algebra for dilation matrices: determinants, exact
//! inverses, Smith normal form, coset representatives of `Z^s / M Z^s` and
//! the dual evaluation points on the torus.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Index, Rational, Result};

/// Tolerance on eigenvalue moduli for the numeric expanding check (`s >= 3`).
pub const EXPANDING_TOLERANCE: f64 = 1e-9;

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(IntMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let mut m = IntMatrix::identity(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        IntMatrix { n, data }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self.get(i, k) as i128 * other.get(k, j) as i128;
                }
                data[i * n + j] = i64::try_from(acc).map_err(|_| Error::Overflow)?;
            }
        }
        Ok(IntMatrix { n, data })
    }

    /// `self * v`. Panics on overflow, which cannot happen for the small
    /// matrices and windows this crate works with.
    pub fn mul_vec(&self, v: &[i64]) -> Index {
        assert_eq!(v.len(), self.n, "vector length must match matrix size");
        (0..self.n)
            .map(|i| {
                let acc: i128 = (0..self.n).map(|k| self.get(i, k) as i128 * v[k] as i128).sum();
                i64::try_from(acc).expect("lattice coordinate overflow")
            })
            .collect()
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| Rational::from_integer(v.into())).collect(),
        }
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> i64 {
        let n = self.n;
        let mut a: Vec<i128> = self.data.iter().map(|&v| v as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&i| a[i * n + k] != 0) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        i64::try_from(sign * a[n * n - 1]).expect("determinant overflow")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Dense square rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Rational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rational::one();
        }
        RatMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                data.push(acc);
            }
        }
        RatMatrix { n, data }
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        RatMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| (0..self.n).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * &v[k]))
            .collect()
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Rational::zero(), |acc, k| {
                    acc + self.get(i, k) * Rational::from_integer(v[k].into())
                })
            })
            .collect()
    }

    pub fn pow(&self, r: u32) -> RatMatrix {
        (0..r).fold(RatMatrix::identity(self.n), |acc, _| acc.mul(self))
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = RatMatrix::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] = &a[col * n + j] / &p;
                inv[col * n + j] = &inv[col * n + j] / &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for j in 0..n {
                    let t = &f * &a[col * n + j];
                    a[r * n + j] -= t;
                    let t = &f * &inv[col * n + j];
                    inv[r * n + j] -= t;
                }
            }
        }
        Ok(RatMatrix { n, data: inv })
    }
}

/// Exact determinant and inverse; fails with `SingularMatrix` when `det = 0`.
pub fn determinant_and_inverse(m: &IntMatrix) -> Result<(i64, RatMatrix)> {
    let det = m.determinant();
    if det == 0 {
        return Err(Error::SingularMatrix);
    }
    Ok((det, m.to_rational().inverse()?))
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.dim()).map(|i| self.d.get(i, i)).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithForm> {
    let n = a.dim();
    if a.determinant() == 0 {
        return Err(Error::SingularMatrix);
    }
    let mut d: Vec<Vec<i128>> = a.rows().iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = IntMatrix::identity(n).rows().iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut v = u.clone();

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block goes to (t, t)
            let (pi, pj) = {
                let mut best: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..n {
                        if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                best.ok_or(Error::SingularMatrix)?
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = Integer::div_floor(&d[i][t], &p);
                if q != 0 {
                    for j in 0..n {
                        d[i][j] -= q * d[t][j];
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..n {
                let q = Integer::div_floor(&d[t][j], &p);
                if q != 0 {
                    for i in 0..n {
                        d[i][j] -= q * d[i][t];
                        v[i][j] -= q * v[i][t];
                    }
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..n).find(|&i| (t + 1..n).any(|j| d[i][j] % p != 0));
            match offender {
                Some(i) => {
                    for j in 0..n {
                        d[t][j] += d[i][j];
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for j in 0..n {
                d[t][j] = -d[t][j];
                u[t][j] = -u[t][j];
            }
        }
    }

    let conv = |m: Vec<Vec<i128>>| -> Result<IntMatrix> {
        let rows = m
            .into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).map_err(|_| Error::Overflow)).collect())
            .collect::<Result<Vec<Vec<i64>>>>()?;
        IntMatrix::from_rows(&rows)
    };
    Ok(SmithForm {
        u: conv(u)?,
        d: conv(d)?,
        v: conv(v)?,
    })
}

/// The sublattice `B Z^s` of a nonsingular integer matrix `B`, with the
/// integer arithmetic needed for congruence tests and reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
    det: i64,
    adj: IntMatrix,
}

impl Lattice {
    pub fn new(basis: IntMatrix) -> Result<Self> {
        let (det, inv) = determinant_and_inverse(&basis)?;
        let n = basis.dim();
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let v = inv.get(i, j) * Rational::from_integer(det.into());
                *x = v.to_integer().to_i64().ok_or(Error::Overflow)?;
            }
        }
        Ok(Lattice {
            basis,
            det,
            adj: IntMatrix::from_rows(&rows)?,
        })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn index(&self) -> u64 {
        self.det.unsigned_abs()
    }

    /// `B^{-1} v` if it is integral.
    pub fn coordinates(&self, v: &[i64]) -> Option<Index> {
        let w = self.adj.mul_vec(v);
        w.iter()
            .map(|&x| if x % self.det == 0 { Some(x / self.det) } else { None })
            .collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.adj.mul_vec(v).iter().all(|&x| x % self.det == 0)
    }

    pub fn congruent(&self, a: &[i64], b: &[i64]) -> bool {
        let diff: Index = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.contains(&diff)
    }

    /// `v - B floor(B^{-1} v)`, the representative with `B^{-1} e` in `[0,1)^s`.
    pub fn reduce(&self, v: &[i64]) -> Index {
        let floors: Index = self.adj.mul_vec(v).iter().map(|x| x.div_floor(&self.det)).collect();
        let shift = self.basis.mul_vec(&floors);
        v.iter().zip(shift).map(|(a, b)| a - b).collect()
    }

    /// Coset representatives, enumerated from the Smith form and then
    /// canonicalized by [`Lattice::reduce`]. Zero comes first; the rest are
    /// sorted lexicographically.
    pub fn representatives(&self) -> Result<Vec<Index>> {
        let snf = smith_normal_form(&self.basis)?;
        let u_inv = Lattice::new(snf.u.clone())?.adj;
        let u_det = snf.u.determinant();
        let factors = snf.invariant_factors();
        let n = factors.len();
        let mut reps = Vec::with_capacity(self.index() as usize);
        let mut digits = vec![0i64; n];
        loop {
            // U^{-1} = adj(U) / det(U), det(U) = +-1
            let raw: Index = u_inv.mul_vec(&digits).into_iter().map(|x| x * u_det).collect();
            reps.push(self.reduce(&raw));
            let mut pos = 0;
            loop {
                if pos == n {
                    reps.sort_by(|a, b| {
                        let za = a.iter().all(|&x| x == 0);
                        let zb = b.iter().all(|&x| x == 0);
                        zb.cmp(&za).then_with(|| a.cmp(b))
                    });
                    return Ok(reps);
                }
                digits[pos] += 1;
                if digits[pos] < factors[pos] {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Outcome of the expanding test, with how it was decided.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpandingCheck {
    pub expanding: bool,
    /// `true` when decided by exact integer inequalities.
    pub exact: bool,
    /// Smallest eigenvalue modulus, computed in floating point.
    pub min_modulus: f64,
}

/// Decides whether every eigenvalue has modulus greater than one.
///
/// For `s <= 2` the verdict is exact (Jury conditions on the reversed
/// characteristic polynomial). For larger `s` the eigenvalues of the
/// companion matrix of the exact characteristic polynomial are computed
/// numerically and compared against `1 + EXPANDING_TOLERANCE`.
pub fn is_expanding(m: &IntMatrix) -> ExpandingCheck {
    let charpoly = characteristic_polynomial(m);
    let min_modulus = min_root_modulus(&charpoly);
    match m.dim() {
        1 => ExpandingCheck {
            expanding: m.get(0, 0).abs() > 1,
            exact: true,
            min_modulus,
        },
        2 => {
            let t = (m.get(0, 0) + m.get(1, 1)) as i128;
            let d = m.determinant() as i128;
            // roots of d x^2 - t x + 1 are the reciprocal eigenvalues
            let sg = d.signum();
            let (a2, a1, a0) = (d.abs(), -t * sg, sg);
            let expanding = d != 0 && a2 + a1 + a0 > 0 && a2 - a1 + a0 > 0 && a0.abs() < a2;
            ExpandingCheck {
                expanding,
                exact: true,
                min_modulus,
            }
        }
        _ => ExpandingCheck {
            expanding: min_modulus > 1.0 + EXPANDING_TOLERANCE,
            exact: false,
            min_modulus,
        },
    }
}

/// Monic characteristic polynomial by Faddeev-LeVerrier, coefficients in
/// ascending order.
pub fn characteristic_polynomial(m: &IntMatrix) -> Vec<i64> {
    let n = m.dim();
    let a = m.to_rational();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = RatMatrix::identity(n);
    for k in 1..=n {
        let am = a.mul(&mk);
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + am.get(i, i));
        let c = -trace / Rational::from_integer((k as i64).into());
        coeffs[n - k] = c.clone();
        let mut next = am;
        for i in 0..n {
            next.data[i * n + i] += &c;
        }
        mk = next;
    }
    coeffs
        .iter()
        .map(|c| c.to_integer().to_i64().expect("characteristic polynomial overflow"))
        .collect()
}

fn min_root_modulus(monic_ascending: &[i64]) -> f64 {
    let n = monic_ascending.len() - 1;
    let companion = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -(monic_ascending[i] as f64)
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min)
}

/// Integer expanding dilation matrix with its exact inverse and the lattice
/// structures of `M` and `M^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationMatrix {
    matrix: IntMatrix,
    det: i64,
    inv: RatMatrix,
    primal: Lattice,
    dual: Lattice,
    expanding: ExpandingCheck,
}

impl DilationMatrix {
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        Self::build(rows, true)
    }

    /// Accepts a non-expanding matrix (still requires `|det| >= 2`).
    pub fn new_unchecked(rows: &[Vec<i64>]) -> Result<Self> {
        Self::build(rows, false)
    }

    fn build(rows: &[Vec<i64>], require_expanding: bool) -> Result<Self> {
        let matrix = IntMatrix::from_rows(rows)?;
        let (det, inv) = determinant_and_inverse(&matrix)?;
        if det.abs() < 2 {
            return Err(Error::DegenerateDilation(det));
        }
        let expanding = is_expanding(&matrix);
        if require_expanding && !expanding.expanding {
            return Err(Error::NotExpanding(expanding.min_modulus));
        }
        Ok(DilationMatrix {
            primal: Lattice::new(matrix.clone())?,
            dual: Lattice::new(matrix.transpose())?,
            matrix,
            det,
            inv,
            expanding,
        })
    }

    pub fn scalar(s: usize, k: i64) -> Result<Self> {
        Self::new(&IntMatrix::diagonal(&vec![k; s]).rows())
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    /// `m = |det M|`.
    pub fn m(&self) -> u64 {
        self.det.unsigned_abs()
    }

    pub fn inverse(&self) -> &RatMatrix {
        &self.inv
    }

    /// `M^{-r}`.
    pub fn inverse_power(&self, r: u32) -> RatMatrix {
        self.inv.pow(r)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.primal
    }

    pub fn dual_lattice(&self) -> &Lattice {
        &self.dual
    }

    pub fn expanding(&self) -> &ExpandingCheck {
        &self.expanding
    }

    pub fn primal_cosets(&self) -> CosetReps {
        primal_cosets(self)
    }

    pub fn dual_points(&self) -> DualCosets {
        dual_coset_points(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetKind {
    /// `Z^s / M Z^s`
    Primal,
    /// `Z^s / M^T Z^s`
    Dual,
}

/// `m` pairwise non-congruent representatives, zero first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetReps {
    pub kind: CosetKind,
    pub reps: Vec<Index>,
}

impl CosetReps {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Index> {
        self.reps.iter()
    }
}

pub fn primal_cosets(m: &DilationMatrix) -> CosetReps {
    CosetReps {
        kind: CosetKind::Primal,
        reps: m.primal.representatives().expect("dilation matrix is nonsingular"),
    }
}

/// Dual representatives `xi` and the torus points `exp(2 pi i M^{-T} xi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCosets {
    pub reps: CosetReps,
    pub points: Vec<UnityPoint>,
}

impl DualCosets {
    /// The points other than `1`.
    pub fn nontrivial(&self) -> impl Iterator<Item = (usize, &UnityPoint)> {
        self.points.iter().enumerate().skip(1)
    }
}

pub fn dual_coset_points(m: &DilationMatrix) -> DualCosets {
    let reps = m.dual.representatives().expect("dilation matrix is nonsingular");
    let inv_t = m.dual.basis().to_rational().inverse().expect("nonsingular");
    let points = reps
        .iter()
        .map(|xi| {
            let exps = inv_t.mul_int_vec(xi).into_iter().map(|x| frac(&x)).collect();
            UnityPoint::new(exps)
        })
        .collect();
    DualCosets {
        reps: CosetReps {
            kind: CosetKind::Dual,
            reps,
        },
        points,
    }
}

fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Point on the torus whose coordinates are `exp(2 pi i * exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnityPoint {
    exponents: Vec<Rational>,
}

impl UnityPoint {
    /// Exponents are reduced into `[0, 1)`.
    pub fn new(exponents: Vec<Rational>) -> Self {
        UnityPoint {
            exponents: exponents.iter().map(frac).collect(),
        }
    }

    pub fn one(s: usize) -> Self {
        UnityPoint {
            exponents: vec![Rational::zero(); s],
        }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Rational] {
        &self.exponents
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    /// Least common multiple of the exponent denominators.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .fold(1u64, |acc, e| acc.lcm(&e.denom().to_u64().expect("small denominator")))
    }

    /// `(N, n)` with `exponent_i = n_i / N`.
    pub fn integer_exponents(&self) -> (u64, Vec<u64>) {
        let order = self.order();
        let n = self
            .exponents
            .iter()
            .map(|e| (e * Rational::from_integer(order.into())).to_integer().to_u64().expect("in range"))
            .collect();
        (order, n)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.exponents
            .iter()
            .map(|e| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }
}

impl fmt::Display for UnityPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self
            .exponents
            .iter()
            .map(|e| {
                let four = e * Rational::from_integer(4.into());
                if four.is_integer() {
                    ["1", "i", "-1", "-i"][four.to_integer().to_usize().unwrap_or(0) % 4].to_string()
                } else {
                    format!("exp(2pi i*{}/{})", e.numer(), e.denom())
                }
            })
            .collect();
        write!(f, "({})", coords.join(", "))
    }
}

/// Lattice points of the closed tile `M [0,1]^s`.
pub fn closed_tile_points(m: &DilationMatrix) -> Vec<Index> {
    let s = m.dim();
    let mut lo = vec![i64::MAX; s];
    let mut hi = vec![i64::MIN; s];
    for corner in 0..(1u32 << s) {
        let c: Index = (0..s).map(|i| ((corner >> i) & 1) as i64).collect();
        for (i, v) in m.matrix().mul_vec(&c).into_iter().enumerate() {
            lo[i] = lo[i].min(v);
            hi[i] = hi[i].max(v);
        }
    }
    let mut out = Vec::new();
    for alpha in BoxIter::new(&lo, &hi) {
        let y = m.inverse().mul_int_vec(&alpha);
        if y.iter().all(|t| !t.is_negative() && *t <= Rational::one()) {
            out.push(alpha);
        }
    }
    out
}

/// Iterates the integer points of `[lo, hi]` in lexicographic order.
#[derive(Clone, Debug)]
pub struct BoxIter {
    lo: Index,
    hi: Index,
    next: Option<Index>,
}

impl BoxIter {
    pub fn new(lo: &[i64], hi: &[i64]) -> Self {
        let empty = lo.iter().zip(hi).any(|(a, b)| a > b);
        BoxIter {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            next: if empty { None } else { Some(lo.to_vec()) },
        }
    }

    /// The cube `[-r, r]^s`.
    pub fn cube(s: usize, r: i64) -> Self {
        BoxIter::new(&vec![-r; s], &vec![r; s])
    }
}

impl Iterator for BoxIter {
    type Item = Index;

    fn next(&mut self) -> Option<Index> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for i in (0..succ.len()).rev() {
            if succ[i] < self.hi[i] {
                succ[i] += 1;
                self.next = Some(succ);
                return Some(cur);
            }
            succ[i] = self.lo[i];
        }
        Some(cur)
    }
}
