//! Exact solution of rational linear systems `A x = b`.
//!
//! Rows are scaled to integers and eliminated fraction-free (each updated
//! row is divided by its content), pivoting on the first nonzero entry of
//! each column. The solution set is returned in reduced echelon form:
//! free variables are the non-pivot columns, the particular solution sets
//! them to zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct AffineSpace {
    pub particular: Vec<Rational>,
    /// One direction per free variable; `basis[i][free[i]] = 1`.
    pub basis: Vec<Vec<Rational>>,
    pub free: Vec<usize>,
}

impl AffineSpace {
    pub fn point(&self, params: &[Rational]) -> Vec<Rational> {
        let mut x = self.particular.clone();
        for (t, dir) in params.iter().zip(&self.basis) {
            for (xi, di) in x.iter_mut().zip(dir) {
                *xi += t * di;
            }
        }
        x
    }

    /// Whether `x` lies in the space.
    pub fn contains(&self, x: &[Rational]) -> bool {
        let params: Vec<Rational> = self.free.iter().map(|&f| &x[f] - &self.particular[f]).collect();
        self.point(&params) == x
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter().map(|r| (r * Rational::from_integer(l.clone())).to_integer()).collect()
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Solves `a x = b` over the rationals; `None` when inconsistent.
#[allow(clippy::needless_range_loop)]
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<AffineSpace> {
    let mut rows: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut full = r.clone();
            full.push(bi.clone());
            integer_row(&full)
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let (pv, f) = (rows[r][c].clone(), rows[i][c].clone());
            for k in 0..=ncols {
                rows[i][k] = &pv * &rows[i][k] - &f * &rows[r][k];
            }
            normalize(&mut rows[i]);
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }

    // back substitution into reduced echelon form over Q
    let mut red: Vec<Vec<Rational>> = rows[..r]
        .iter()
        .map(|row| row.iter().cloned().map(Rational::from_integer).collect())
        .collect();
    for (i, &c) in pivots.iter().enumerate().rev() {
        let p = red[i][c].clone();
        for x in red[i].iter_mut() {
            *x /= &p;
        }
        for k in 0..i {
            let f = red[k][c].clone();
            if f.is_zero() {
                continue;
            }
            for col in 0..=ncols {
                let t = &f * &red[i][col];
                red[k][col] -= t;
            }
        }
    }

    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = red[i][ncols].clone();
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut dir = vec![Rational::zero(); ncols];
            dir[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                dir[c] = -red[i][f].clone();
            }
            dir
        })
        .collect();
    Some(AffineSpace { particular, basis, free })
}

/// Sign-normalized integer content of a rational row, exposed for tests.
pub fn primitive_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let mut r = integer_row(row);
    normalize(&mut r);
    if r.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in r.iter_mut() {
            *x = -x.clone();
        }
    }
    r
}
