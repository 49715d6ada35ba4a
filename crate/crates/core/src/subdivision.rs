//! The subdivision operator, the parameter values attached to each level,
//! and a step-wise polynomial-reproduction oracle.
//!
//! One step computes `d'_alpha = sum_beta a_{alpha - M beta} d_beta`. Data
//! is only kept where it is uncontaminated by the finite input window: an
//! output index is valid iff every `beta` it needs was valid in the input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::Path;

use num_traits::{One, Zero};

use crate::analysis::{fmt_index, Window};
use crate::lattice::{DilationMatrix, RatMatrix};
use crate::symbol::LaurentPoly;
use crate::{format_rational, Error, Index, Rational, Result, Scalar};

/// Grid data `d^{(r)}` on its valid index set.
#[derive(Clone, Debug, PartialEq)]
pub struct GridData<T> {
    dim: usize,
    values: BTreeMap<Index, T>,
}

impl<T: Scalar> GridData<T> {
    pub fn from_values(dim: usize, values: BTreeMap<Index, T>) -> Result<Self> {
        if let Some(k) = values.keys().find(|k| k.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k.len(),
            });
        }
        Ok(GridData { dim, values })
    }

    /// Samples `f` on every point of `window`.
    pub fn sample(window: &Window, f: impl Fn(&[i64]) -> T) -> Self {
        GridData {
            dim: window.lo.len(),
            values: window.points().map(|a| {
                let v = f(&a);
                (a, v)
            }).collect(),
        }
    }

    pub fn constant(window: &Window, c: T) -> Self {
        Self::sample(window, |_| c.clone())
    }

    /// Unit impulse at the origin, zero elsewhere on `window`.
    pub fn delta(window: &Window) -> Self {
        Self::sample(window, |a| if a.iter().all(|&x| x == 0) { T::one() } else { T::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, alpha: &[i64]) -> Option<&T> {
        self.values.get(alpha)
    }

    pub fn is_valid(&self, alpha: &[i64]) -> bool {
        self.values.contains_key(alpha)
    }

    pub fn values(&self) -> impl Iterator<Item = (&Index, &T)> {
        self.values.iter()
    }

    /// Bounding box of the valid set.
    pub fn valid_box(&self) -> Option<Window> {
        let mut it = self.values.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for k in it {
            for i in 0..self.dim {
                lo[i] = lo[i].min(k[i]);
                hi[i] = hi[i].max(k[i]);
            }
        }
        Some(Window { lo, hi })
    }
}

/// One application of the subdivision operator.
pub fn subdivide_step<T: Scalar>(a: &LaurentPoly<T>, m: &DilationMatrix, d: &GridData<T>) -> Result<GridData<T>> {
    if a.dim() != m.dim() || d.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: if a.dim() != m.dim() { a.dim() } else { d.dim() },
        });
    }
    let lat = m.lattice();
    // number of mask entries in each coset: a valid output index receives
    // exactly that many contributions
    let mut per_coset: BTreeMap<Index, usize> = BTreeMap::new();
    for (gamma, _) in a.terms() {
        *per_coset.entry(lat.reduce(gamma)).or_default() += 1;
    }
    let mut acc: BTreeMap<Index, (T, usize)> = BTreeMap::new();
    for (beta, value) in d.values() {
        let base = m.matrix().mul_vec(beta);
        for (gamma, coeff) in a.terms() {
            let alpha: Index = base.iter().zip(gamma).map(|(x, y)| x + y).collect();
            let entry = acc.entry(alpha).or_insert_with(|| (T::zero(), 0));
            entry.0 = entry.0.clone() + coeff.clone() * value.clone();
            entry.1 += 1;
        }
    }
    let values = acc
        .into_iter()
        .filter(|(alpha, (_, count))| per_coset.get(&lat.reduce(alpha)) == Some(count))
        .map(|(alpha, (v, _))| (alpha, v))
        .collect();
    Ok(GridData { dim: d.dim, values })
}

/// Parameter values `t^{(r)}_alpha = t_0^{(r)} + M^{-r} alpha` with
/// `t_0^{(r)} = t_0^{(r-1)} - M^{-r} tau`, `t_0^{(0)} = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamState {
    pub r: u32,
    pub t0: Vec<Rational>,
    pub minv_r: RatMatrix,
    minv: RatMatrix,
    tau: Vec<Rational>,
}

impl ParamState {
    pub fn new(m: &DilationMatrix, tau: &[Rational]) -> Self {
        ParamState {
            r: 0,
            t0: vec![Rational::zero(); m.dim()],
            minv_r: RatMatrix::identity(m.dim()),
            minv: m.inverse().clone(),
            tau: tau.to_vec(),
        }
    }

    pub fn advance(&mut self) {
        self.r += 1;
        self.minv_r = self.minv_r.mul(&self.minv);
        let shift = self.minv_r.mul_vec(&self.tau);
        for (t, s) in self.t0.iter_mut().zip(shift) {
            *t -= s;
        }
    }

    pub fn at(&self, alpha: &[i64]) -> Vec<Rational> {
        self.minv_r
            .mul_int_vec(alpha)
            .into_iter()
            .zip(&self.t0)
            .map(|(x, t)| x + t)
            .collect()
    }
}

pub fn parameter_grid(m: &DilationMatrix, tau: &[Rational], r: u32, window: &Window) -> BTreeMap<Index, Vec<Rational>> {
    let mut state = ParamState::new(m, tau);
    for _ in 0..r {
        state.advance();
    }
    window.points().map(|a| {
        let t = state.at(&a);
        (a, t)
    }).collect()
}

/// A polynomial `pi(x) = sum c_e x^e` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl PolySpec {
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(PolySpec { dim, terms: map })
    }

    pub fn monomial(exponents: &[u32]) -> Self {
        PolySpec::new(exponents.len(), [(exponents.to_vec(), Rational::one())]).expect("consistent dimension")
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        PolySpec::new(dim, [(vec![0; dim], c)]).expect("consistent dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as i64).max().unwrap_or(-1)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            acc + x
                .iter()
                .zip(e)
                .fold(c.clone(), |p, (xi, &k)| p * num_traits::pow(xi.clone(), k as usize))
        })
    }

    pub fn eval_int(&self, x: &[i64]) -> Rational {
        let xs: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v.into())).collect();
        self.eval(&xs)
    }

    /// Parses sums of terms like `3/2*x1^2*x2 - x2 + 4`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let err = |msg: &str| Error::Parse(format!("{msg} in polynomial {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if terms.is_empty() => (1, rest),
                _ => return Err(err("expected '+' or '-'")),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let mut coeff = Rational::from_integer(sign.into());
            let mut exps = vec![0u32; dim];
            for factor in term.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, p)) => (i, p.parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (var, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| err("bad variable index"))?;
                    if i == 0 || i > dim {
                        return Err(err("variable index out of range"));
                    }
                    exps[i - 1] += pow;
                } else {
                    coeff *= crate::parse_rational(factor).map_err(|_| err("bad coefficient"))?;
                }
            }
            terms.push((exps, coeff));
            rest = tail;
        }
        PolySpec::new(dim, terms)
    }
}

impl fmt::Display for PolySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut factors = vec![format_rational(c)];
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(format!("x{}", i + 1)),
                        _ => factors.push(format!("x{}^{}", i + 1, k)),
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub r: u32,
    pub alpha: Index,
    pub expected: Rational,
    pub got: Rational,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {} at alpha = {}: expected {}, got {}",
            self.r,
            fmt_index(&self.alpha),
            format_rational(&self.expected),
            format_rational(&self.got)
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleVerdict {
    pub pass: bool,
    pub mismatch: Option<Mismatch>,
    /// Number of exact comparisons made.
    pub compared: usize,
}

/// Samples `d^{(0)}_alpha = pi(alpha)` on `window`, runs `steps` steps and
/// compares `d^{(r)}_alpha` with `pi(t^{(r)}_alpha)` on every valid index.
pub fn reproduction_oracle(
    a: &LaurentPoly<Rational>,
    m: &DilationMatrix,
    tau: &[Rational],
    pi: &PolySpec,
    steps: u32,
    window: &Window,
) -> Result<OracleVerdict> {
    if steps == 0 {
        return Err(Error::WindowTooSmall("at least one step is required".into()));
    }
    if pi.dim() != m.dim() || tau.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: if pi.dim() != m.dim() { pi.dim() } else { tau.len() },
        });
    }
    let mut data = GridData::sample(window, |alpha| pi.eval_int(alpha));
    let mut params = ParamState::new(m, tau);
    let mut compared = 0;
    for r in 1..=steps {
        data = subdivide_step(a, m, &data)?;
        params.advance();
        if data.is_empty() {
            return Err(Error::WindowTooSmall(format!("no valid data left after {r} step(s)")));
        }
        for (alpha, got) in data.values() {
            let expected = pi.eval(&params.at(alpha));
            compared += 1;
            if &expected != got {
                return Ok(OracleVerdict {
                    pass: false,
                    mismatch: Some(Mismatch {
                        r,
                        alpha: alpha.clone(),
                        expected,
                        got: got.clone(),
                    }),
                    compared,
                });
            }
        }
    }
    Ok(OracleVerdict {
        pass: true,
        mismatch: None,
        compared,
    })
}

/// Writes every level `0..=steps` as CSV rows `level,t1..ts,value`, rows
/// ordered by level and then lexicographically by index.
pub fn export_refinement<T: Scalar, W: Write>(
    a: &LaurentPoly<T>,
    m: &DilationMatrix,
    tau: &[Rational],
    d0: &GridData<T>,
    steps: u32,
    out: &mut W,
) -> Result<()> {
    let io = |e: std::io::Error| Error::Parse(format!("I/O error: {e}"));
    let header: Vec<String> = std::iter::once("level".to_string())
        .chain((1..=m.dim()).map(|i| format!("t{i}")))
        .chain(std::iter::once("value".to_string()))
        .collect();
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    let mut data = d0.clone();
    let mut params = ParamState::new(m, tau);
    for level in 0..=steps {
        if level > 0 {
            data = subdivide_step(a, m, &data)?;
            params.advance();
        }
        for (alpha, v) in data.values() {
            let t: Vec<String> = params.at(alpha).iter().map(|x| Scalar::to_f64(x).to_string()).collect();
            writeln!(out, "{},{},{}", level, t.join(","), v.to_f64()).map_err(io)?;
        }
    }
    Ok(())
}

pub fn export_refinement_to_path<T: Scalar>(
    a: &LaurentPoly<T>,
    m: &DilationMatrix,
    tau: &[Rational],
    d0: &GridData<T>,
    steps: u32,
    path: &Path,
) -> std::io::Result<()> {
    let mut buf = Vec::new();
    export_refinement(a, m, tau, d0, steps, &mut buf).map_err(|e| std::io::Error::other(e.to_string()))?;
    std::fs::write(path, buf)
}

/// Indices where two grids disagree, restricted to indices valid in both.
pub fn disagreements<T: Scalar>(x: &GridData<T>, y: &GridData<T>) -> BTreeSet<Index> {
    x.values()
        .filter(|(k, v)| y.get(k).is_some_and(|w| w != *v))
        .map(|(k, _)| k.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio, Symbol};

    fn hat() -> Symbol {
        let f = Symbol::from_terms(1, [(vec![0], rat(1)), (vec![1], rat(1))]).unwrap();
        f.pow(2).scale(&ratio(1, 2))
    }

    #[test]
    fn delta_step_reproduces_mask() {
        let m = DilationMatrix::new(&[vec![2]]).unwrap();
        let d = GridData::<Rational>::delta(&Window::cube(1, 3));
        let out = subdivide_step(&hat(), &m, &d).unwrap();
        for (k, v) in hat().terms() {
            assert_eq!(out.get(k), Some(v));
        }
        assert_eq!(out.get(&[3]), Some(&rat(0)));
    }

    #[test]
    fn valid_set_shrinks_correctly() {
        let m = DilationMatrix::new(&[vec![2]]).unwrap();
        let d = GridData::constant(&Window::cube(1, 2), rat(1));
        let out = subdivide_step(&hat(), &m, &d).unwrap();
        // even alpha needs beta = alpha/2 - 1 and alpha/2, odd alpha needs (alpha-1)/2
        let w = out.valid_box().unwrap();
        assert_eq!((w.lo[0], w.hi[0]), (-3, 5));
        assert!(out.values().all(|(_, v)| *v == rat(1)));
        assert!(!out.is_valid(&[-4]) && !out.is_valid(&[6]));
        assert_eq!(out.len(), 9);
    }

    #[test]
    fn numeric_and_exact_agree() {
        let m = DilationMatrix::new(&[vec![2]]).unwrap();
        let w = Window::cube(1, 4);
        let exact = subdivide_step(&hat(), &m, &GridData::sample(&w, |a| rat(a[0] * a[0]))).unwrap();
        let approx =
            subdivide_step(&hat().to_scalar::<f64>(), &m, &GridData::sample(&w, |a| (a[0] * a[0]) as f64)).unwrap();
        assert_eq!(exact.len(), approx.len());
        for (k, v) in exact.values() {
            assert!((Scalar::to_f64(v) - approx.get(k).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn parameter_grid_examples() {
        let m = DilationMatrix::new(&[vec![1, 2], vec![-2, -1]]).unwrap();
        let zero = [rat(0), rat(0)];
        let g = parameter_grid(&m, &zero, 2, &Window::cube(2, 2));
        for (a, t) in &g {
            assert_eq!(t, &vec![ratio(-a[0], 3), ratio(-a[1], 3)]);
        }
        let tau = [ratio(1, 2), rat(2)];
        let g = parameter_grid(&m, &tau, 1, &Window::cube(2, 2));
        for (a, t) in &g {
            let shifted = [rat(a[0]) - &tau[0], rat(a[1]) - &tau[1]];
            assert_eq!(t, &m.inverse().mul_vec(&shifted));
        }
    }

    #[test]
    fn poly_spec_parsing() {
        let p = PolySpec::parse("3/2*x1^2*x2 - x2 + 4", 2).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.eval_int(&[2, 1]), rat(9));
        assert_eq!(PolySpec::parse("x1*x1", 2).unwrap(), PolySpec::monomial(&[2, 0]));
        assert_eq!(PolySpec::parse("-x2", 2).unwrap().eval_int(&[0, 5]), rat(-5));
        assert!(PolySpec::parse("x3", 2).is_err());
        assert!(PolySpec::parse("", 2).is_err());
        assert!(PolySpec::parse("x1 +", 2).is_err());
        assert!(PolySpec::parse("y1", 2).is_err());
        let p = PolySpec::parse("2*x1 - 2*x1", 2).unwrap();
        assert_eq!(p.degree(), -1);
        assert_eq!(PolySpec::parse("1/3*x1^2", 1).unwrap().to_string(), "1/3*x1^2");
    }

    #[test]
    fn oracle_detects_wrong_shift() {
        let m = DilationMatrix::new(&[vec![2]]).unwrap();
        let w = Window::cube(1, 8);
        let lin = PolySpec::monomial(&[1]);
        // tau = a'(1) / m = 1
        let ok = reproduction_oracle(&hat(), &m, &[rat(1)], &lin, 3, &w).unwrap();
        assert!(ok.pass, "{:?}", ok.mismatch);
        let bad = reproduction_oracle(&hat(), &m, &[rat(0)], &lin, 3, &w).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.mismatch.unwrap().r, 1);
        let err = reproduction_oracle(&hat(), &m, &[rat(1)], &lin, 0, &w);
        assert!(matches!(err, Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn export_levels() {
        let m = DilationMatrix::new(&[vec![2]]).unwrap();
        let d0 = GridData::constant(&Window::cube(1, 1), 1.0f64);
        let mut buf = Vec::new();
        export_refinement(&hat().to_scalar::<f64>(), &m, &[rat(1)], &d0, 0, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "level,t1,value\n0,-1,1\n0,0,1\n0,1,1\n");
    }
}
