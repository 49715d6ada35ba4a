//! Scheme factories: three-direction box splines, tile symbols, a registry
//! of named schemes, and an exact solver for affine combinations of
//! symbols that meet prescribed reproduction conditions.

use num_traits::{One, Zero};

use crate::lattice::DilationMatrix;
use crate::linalg::{solve, AffineSpace};
use crate::symbol::{DerivValue, MultiIndex};
use crate::{rat, ratio, Error, Rational, Result, Symbol};

/// `4 ((1+z1)/2)^h ((1+z2)/2)^i ((1+z1 z2)/2)^j`, refined by `M = 2I`.
pub fn box_spline_symbol(h: u32, i: u32, j: u32) -> Symbol {
    let half = ratio(1, 2);
    let factor = |dir: Vec<i64>| {
        Symbol::from_terms(2, [(vec![0, 0], half.clone()), (dir, half.clone())]).expect("two-dimensional")
    };
    factor(vec![1, 0])
        .pow(h)
        .try_mul(&factor(vec![0, 1]).pow(i))
        .and_then(|p| p.try_mul(&factor(vec![1, 1]).pow(j)))
        .expect("two-dimensional")
        .scale(&rat(4))
}

/// `sum_{e in E} z^e` over the canonical coset representatives.
pub fn tile_symbol(m: &DilationMatrix) -> Symbol {
    Symbol::from_terms(m.dim(), m.primal_cosets().reps.into_iter().map(|e| (e, Rational::one())))
        .expect("representatives have the matrix dimension")
}

/// A named scheme: symbol plus dilation.
#[derive(Clone, Debug)]
pub struct BuiltinScheme {
    pub name: &'static str,
    pub description: &'static str,
    pub symbol: Symbol,
    pub dilation: DilationMatrix,
    pub notes: Vec<String>,
}

pub const BUILTIN_NAMES: &[&str] = &[
    "sqrt3-approx",
    "sqrt3-interp",
    "tile-2120-conv2",
    "box-221",
    "box-212",
    "box-122",
    "box-330",
    "box-303",
    "box-033",
    "box-combination",
];

fn sqrt3_dilation() -> DilationMatrix {
    DilationMatrix::new(&[vec![1, 2], vec![-2, -1]]).expect("valid dilation")
}

fn two_i() -> DilationMatrix {
    DilationMatrix::scalar(2, 2).expect("valid dilation")
}

fn table(terms: &[((i64, i64), Rational)]) -> Symbol {
    Symbol::from_terms(2, terms.iter().map(|((x, y), c)| (vec![*x, *y], c.clone()))).expect("two-dimensional")
}

fn sqrt3_approx() -> Symbol {
    let (sixth, third) = (ratio(1, 6), ratio(1, 3));
    table(&[
        ((1, 1), sixth.clone()),
        ((-1, -1), sixth.clone()),
        ((-1, 2), sixth.clone()),
        ((-2, 1), sixth.clone()),
        ((1, -2), sixth.clone()),
        ((2, -1), sixth),
        ((-1, 0), third.clone()),
        ((0, 1), third.clone()),
        ((1, -1), third.clone()),
        ((0, -1), third.clone()),
        ((1, 0), third.clone()),
        ((-1, 1), third),
    ])
}

fn sqrt3_interp() -> Symbol {
    let (outer, inner) = (ratio(-1, 9), ratio(4, 9));
    table(&[
        ((0, 0), rat(1)),
        ((-2, 0), outer.clone()),
        ((-2, 2), outer.clone()),
        ((0, 2), outer.clone()),
        ((2, 0), outer.clone()),
        ((2, -2), outer.clone()),
        ((0, -2), outer),
        ((-1, 0), inner.clone()),
        ((-1, 1), inner.clone()),
        ((0, 1), inner.clone()),
        ((1, 0), inner.clone()),
        ((1, -1), inner.clone()),
        ((0, -1), inner),
    ])
}

/// `5 B221 - B212 - B122 - 2 B330`.
pub fn box_combination() -> Symbol {
    let parts = [
        (rat(5), box_spline_symbol(2, 2, 1)),
        (rat(-1), box_spline_symbol(2, 1, 2)),
        (rat(-1), box_spline_symbol(1, 2, 2)),
        (rat(-2), box_spline_symbol(3, 3, 0)),
    ];
    let refs: Vec<(Rational, &Symbol)> = parts.iter().map(|(l, s)| (l.clone(), s)).collect();
    Symbol::affine_combine(&refs).expect("weights sum to one")
}

pub fn builtin(name: &str) -> Result<BuiltinScheme> {
    let boxed = |name: &'static str, description: &'static str, h, i, j| BuiltinScheme {
        name,
        description,
        symbol: box_spline_symbol(h, i, j),
        dilation: two_i(),
        notes: Vec::new(),
    };
    Ok(match name {
        "sqrt3-approx" => BuiltinScheme {
            name: "sqrt3-approx",
            description: "approximating sqrt(3) scheme, M = [[1,2],[-2,-1]]",
            symbol: sqrt3_approx(),
            dilation: sqrt3_dilation(),
            notes: vec!["claimed: zero conditions of order at most 2, linear reproduction with tau = (0,0)".into()],
        },
        "sqrt3-interp" => BuiltinScheme {
            name: "sqrt3-interp",
            description: "interpolatory sqrt(3) scheme, M = [[1,2],[-2,-1]]",
            symbol: sqrt3_interp(),
            dilation: sqrt3_dilation(),
            notes: vec![
                "claimed: Z_3 plus the remaining reproduction conditions 'for k = 3'; the computed kR decides \
                 whether the conditions hold for all |j| <= 3"
                    .into(),
            ],
        },
        "tile-2120-conv2" => {
            let m = DilationMatrix::new(&[vec![2, 1], vec![0, 2]]).expect("valid dilation");
            let tile = tile_symbol(&m);
            let mut notes = Vec::new();
            if m.lattice().congruent(&[1, 2], &[0, 0]) {
                notes.push(
                    "(1,2) = M(0,1) is congruent to (0,0); the half-open tile uses (2,1) as the fourth representative"
                        .into(),
                );
            }
            BuiltinScheme {
                name: "tile-2120-conv2",
                description: "(1/4) a(z)^2 with a(z) = sum_{e in E} z^e, M = [[2,1],[0,2]]",
                symbol: tile.pow(2).scale(&ratio(1, 4)),
                dilation: m,
                notes,
            }
        }
        "box-221" => boxed("box-221", "box spline B_{2,2,1}, M = 2I", 2, 2, 1),
        "box-212" => boxed("box-212", "box spline B_{2,1,2}, M = 2I", 2, 1, 2),
        "box-122" => boxed("box-122", "box spline B_{1,2,2}, M = 2I", 1, 2, 2),
        "box-330" => boxed("box-330", "box spline B_{3,3,0}, M = 2I", 3, 3, 0),
        "box-303" => boxed("box-303", "box spline B_{3,0,3}, M = 2I", 3, 0, 3),
        "box-033" => boxed("box-033", "box spline B_{0,3,3}, M = 2I", 0, 3, 3),
        "box-combination" => BuiltinScheme {
            name: "box-combination",
            description: "5 B221 - B212 - B122 - 2 B330, M = 2I",
            symbol: box_combination(),
            dilation: two_i(),
            notes: vec!["claimed: satisfies the reproduction conditions 'for k = 3' with tau = (1,1)".into()],
        },
        // The four approximating sqrt(3) symbols that combine into
        // sqrt3-interp are not bundled: their coefficients are not available.
        _ => return Err(Error::UnknownName(name.to_string())),
    })
}

pub fn builtin_symbols() -> Vec<BuiltinScheme> {
    BUILTIN_NAMES.iter().map(|n| builtin(n).expect("registered name")).collect()
}

/// How `tau` enters the affine system.
#[derive(Clone, Debug, PartialEq)]
pub enum TauMode {
    Fixed(Vec<Rational>),
    /// `tau(lambda) = m^{-1} grad(sum lambda_i a_i)(1)`.
    Free,
}

/// `tau` over the solution family: `base + sum_f t_f directions[f]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauFamily {
    pub base: Vec<Rational>,
    pub directions: Vec<Vec<Rational>>,
}

/// A `|j| >= 2` condition at `1` that is not identically satisfied on the
/// family, as a polynomial in the free parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub j: MultiIndex,
    pub poly: Symbol,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    /// Member with all free parameters zero.
    pub basepoint: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
    pub residuals: Vec<Residual>,
    pub tau: TauFamily,
    space: AffineSpace,
}

impl AffineSolution {
    pub fn member(&self, params: &[Rational]) -> Vec<Rational> {
        self.space.point(params)
    }

    /// Whether `lambda` satisfies all linear conditions.
    pub fn contains(&self, lambda: &[Rational]) -> bool {
        lambda.len() == self.basepoint.len() && self.space.contains(lambda)
    }

    pub fn free_count(&self) -> usize {
        self.basis.len()
    }

    pub fn tau_at(&self, params: &[Rational]) -> Vec<Rational> {
        let mut t = self.tau.base.clone();
        for (p, dir) in params.iter().zip(&self.tau.directions) {
            for (ti, di) in t.iter_mut().zip(dir) {
                *ti += p * di;
            }
        }
        t
    }
}

/// `sum_i lambda_i a_i`.
pub fn combine(symbols: &[Symbol], lambda: &[Rational]) -> Result<Symbol> {
    if symbols.len() != lambda.len() {
        return Err(Error::DimensionMismatch {
            expected: symbols.len(),
            found: lambda.len(),
        });
    }
    let parts: Vec<(Rational, &Symbol)> = lambda.iter().cloned().zip(symbols).collect();
    Symbol::affine_combine(&parts)
}

/// Solves for weights `lambda` (summing to one) such that `sum lambda_i a_i`
/// meets the reproduction conditions for all `|j| <= k`.
///
/// With a fixed `tau` everything is linear in `lambda`. With a free `tau`
/// the `eps`-conditions and `|j| <= 1` are solved linearly; the conditions
/// at `1` with `|j| >= 2` are returned as residual polynomials in the free
/// parameters of the linear family (empty when identically satisfied).
pub fn affine_solver(symbols: &[Symbol], m: &DilationMatrix, k: u32, tau_mode: &TauMode) -> Result<AffineSolution> {
    let n = symbols.len();
    if n == 0 {
        return Err(Error::AffineWeightsInvalid("0 (no symbols)".into()));
    }
    let s = m.dim();
    if let Some(a) = symbols.iter().find(|a| a.dim() != s) {
        return Err(Error::DimensionMismatch {
            expected: s,
            found: a.dim(),
        });
    }
    if let TauMode::Fixed(t) = tau_mode {
        if t.len() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                found: t.len(),
            });
        }
    }
    let mm = Rational::from_integer(m.m().into());
    let dual = m.dual_points();
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one(); n]];
    let mut rhs = vec![Rational::one()];

    for j in MultiIndex::up_to_order(s, k) {
        let at_one: Vec<Rational> = symbols.iter().map(|a| a.eval_deriv_at_one(&j)).collect();
        match tau_mode {
            TauMode::Fixed(tau) => {
                rows.push(at_one);
                rhs.push(&mm * crate::symbol::falling_factorial(&j, tau));
            }
            // |j| = 1 holds by the definition of tau(lambda)
            TauMode::Free if j.is_zero() => {
                rows.push(at_one);
                rhs.push(mm.clone());
            }
            TauMode::Free => {}
        }
        for (_, point) in dual.nontrivial() {
            let coords: Vec<Vec<Rational>> = symbols
                .iter()
                .map(|a| match a.eval_deriv_at(&j, crate::symbol::EvalPoint::Unity(point)) {
                    DerivValue::Cyclo(c) => c.lift(point.order()).reduced(),
                    DerivValue::Rational(r) => vec![r],
                })
                .collect();
            let width = coords.iter().map(Vec::len).max().unwrap_or(0);
            for c in 0..width {
                rows.push(coords.iter().map(|v| v.get(c).cloned().unwrap_or_else(Rational::zero)).collect());
                rhs.push(Rational::zero());
            }
        }
    }

    let space = solve(&rows, &rhs, n).ok_or(Error::Infeasible)?;

    let grad: Vec<Vec<Rational>> = symbols
        .iter()
        .map(|a| (0..s).map(|l| a.eval_deriv_at_one(&MultiIndex::unit(s, l)) / &mm).collect())
        .collect();
    let tau_of = |lambda: &[Rational]| -> Vec<Rational> {
        (0..s)
            .map(|l| lambda.iter().zip(&grad).fold(Rational::zero(), |acc, (x, g)| acc + x * &g[l]))
            .collect()
    };
    let tau = match tau_mode {
        TauMode::Fixed(t) => TauFamily {
            base: t.clone(),
            directions: vec![vec![Rational::zero(); s]; space.basis.len()],
        },
        TauMode::Free => TauFamily {
            base: tau_of(&space.particular),
            directions: space.basis.iter().map(|b| tau_of(b)).collect(),
        },
    };

    let mut residuals = Vec::new();
    if *tau_mode == TauMode::Free && k >= 2 {
        let nfree = space.basis.len();
        let affine = |base: &Rational, dirs: Vec<Rational>| -> Symbol {
            let mut terms = vec![(vec![0i64; nfree], base.clone())];
            for (f, d) in dirs.into_iter().enumerate() {
                let mut e = vec![0i64; nfree];
                e[f] = 1;
                terms.push((e, d));
            }
            Symbol::from_terms(nfree, terms).expect("consistent dimension")
        };
        let tau_polys: Vec<Symbol> = (0..s)
            .map(|l| affine(&tau.base[l], tau.directions.iter().map(|d| d[l].clone()).collect()))
            .collect();
        for j in MultiIndex::up_to_order(s, k).into_iter().filter(|j| j.order() >= 2) {
            let at_one: Vec<Rational> = symbols.iter().map(|a| a.eval_deriv_at_one(&j)).collect();
            let dot = |v: &[Rational]| v.iter().zip(&at_one).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
            let lhs = affine(&dot(&space.particular), space.basis.iter().map(|b| dot(b)).collect());
            let mut q = Symbol::constant(nfree, mm.clone());
            for (l, &jl) in j.0.iter().enumerate() {
                for ell in 0..jl {
                    let factor = tau_polys[l]
                        .try_sub(&Symbol::constant(nfree, rat(ell as i64)))
                        .expect("consistent dimension");
                    q = q.try_mul(&factor).expect("consistent dimension");
                }
            }
            let poly = lhs.try_sub(&q).expect("consistent dimension");
            if poly.is_zero() {
                continue;
            }
            if poly.len() == 1 && poly.coeff(&vec![0; nfree]).is_some() {
                return Err(Error::Infeasible);
            }
            residuals.push(Residual { j, poly });
        }
    }

    Ok(AffineSolution {
        basepoint: space.particular.clone(),
        basis: space.basis.clone(),
        residuals,
        tau,
        space,
    })
}
