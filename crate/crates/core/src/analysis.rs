//! Zero conditions, the parametrization shift `tau`, the maximal degree of
//! polynomial reproduction, and the equivalent moment conditions.
//!
//! For a symbol `a` with dilation `M` (`m = |det M|`), reproduction of
//! degree `k` with shift `tau` holds iff for every `|j| <= k`
//!
//! ```text
//! (D^j a)(1) = m q_j(tau)        and        (D^j a)(eps) = 0  for eps in Xi'
//! ```
//!
//! and the zero condition of order `k` asks `a(1) = m` and the `eps`-zeros
//! for `|j| < k`. Every check here is exact.

use std::fmt;

use num_traits::{One, Zero};

use crate::lattice::{closed_tile_points, CosetReps, DilationMatrix, DualCosets, ExpandingCheck, IntMatrix, UnityPoint};
use crate::symbol::{falling_factorial, DerivValue, MultiIndex};
use crate::{format_rational, Error, Index, Rational, Result, Symbol};

/// Default bound on the degrees searched by [`zero_condition_order`] and
/// [`reproduction_degree`].
pub const DEFAULT_CAP: u32 = 32;

/// Where a condition was evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum ConditionPoint {
    One,
    /// `index` into the dual point list; index 0 is the point `1`.
    Xi { index: usize, point: UnityPoint },
}

/// The first condition that fails.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub j: MultiIndex,
    pub point: ConditionPoint,
    /// `(D^j a)` at the point.
    pub value: DerivValue,
    /// Required value at `1` (`m` or `m q_j(tau)`); at `eps` the requirement is 0.
    pub expected: Option<Rational>,
}

impl Witness {
    /// Index into `Xi` (0 for the point `1`).
    pub fn epsilon_index(&self) -> usize {
        match &self.point {
            ConditionPoint::One => 0,
            ConditionPoint::Xi { index, .. } => *index,
        }
    }

    /// `value - expected`, always nonzero for a genuine witness.
    pub fn defect(&self) -> DerivValue {
        match (&self.value, &self.expected) {
            (DerivValue::Rational(v), Some(e)) => DerivValue::Rational(v - e),
            (v, _) => v.clone(),
        }
    }

    pub fn description(&self) -> String {
        match &self.point {
            ConditionPoint::One => format!(
                "D^{} a(1) = {}, required {}",
                self.j,
                self.value,
                self.expected.as_ref().map(format_rational).unwrap_or_else(|| "0".into())
            ),
            ConditionPoint::Xi { index, point } => {
                format!("D^{} a(eps_{}) = {} at eps_{} = {}, required 0", self.j, index, self.value, index, point)
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description())
    }
}

/// Per-coset sums of the submasks.
#[derive(Clone, Debug, PartialEq)]
pub struct SumRules {
    pub holds: bool,
    pub coset_sums: Vec<(Index, Rational)>,
}

/// Every submask sums to exactly 1.
pub fn sum_rules_check(a: &Symbol, m: &DilationMatrix) -> SumRules {
    let cosets = m.primal_cosets();
    let mut sums = vec![Rational::zero(); cosets.len()];
    for (k, v) in a.terms() {
        let rep = m.lattice().reduce(k);
        let i = cosets.reps.iter().position(|e| *e == rep).expect("reduction lands on a representative");
        sums[i] += v;
    }
    SumRules {
        holds: sums.iter().all(One::is_one),
        coset_sums: cosets.reps.into_iter().zip(sums).collect(),
    }
}

/// Largest zero-condition order found, with the condition that stopped it.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroOrder {
    pub order: u32,
    pub witness: Option<Witness>,
    pub cap_reached: bool,
}

fn normalization_witness(a: &Symbol, m: &DilationMatrix) -> Option<Witness> {
    let value = a.eval_at_one();
    let expected = Rational::from_integer(m.m().into());
    (value != expected).then(|| Witness {
        j: MultiIndex::zero(a.dim()),
        point: ConditionPoint::One,
        value: DerivValue::Rational(value),
        expected: Some(expected),
    })
}

fn epsilon_witness(a: &Symbol, j: &MultiIndex, dual: &DualCosets) -> Option<Witness> {
    dual.nontrivial().find_map(|(index, point)| {
        let v = a.eval_deriv_at_point(j, point);
        (!v.is_zero()).then(|| Witness {
            j: j.clone(),
            point: ConditionPoint::Xi {
                index,
                point: point.clone(),
            },
            value: DerivValue::Cyclo(v),
            expected: None,
        })
    })
}

fn check_dim(a: &Symbol, m: &DilationMatrix) -> Result<()> {
    if a.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: a.dim(),
        });
    }
    Ok(())
}

/// Largest `k <= cap` with `a(1) = m` and `(D^j a)(eps) = 0` for all
/// `eps` in `Xi'` and `|j| < k`.
pub fn zero_condition_order(a: &Symbol, m: &DilationMatrix, cap: u32) -> Result<ZeroOrder> {
    check_dim(a, m)?;
    if let Some(w) = normalization_witness(a, m) {
        return Ok(ZeroOrder {
            order: 0,
            witness: Some(w),
            cap_reached: false,
        });
    }
    let dual = m.dual_points();
    for d in 0..cap {
        for j in MultiIndex::of_order(a.dim(), d) {
            if let Some(w) = epsilon_witness(a, &j, &dual) {
                return Ok(ZeroOrder {
                    order: d,
                    witness: Some(w),
                    cap_reached: false,
                });
            }
        }
    }
    Ok(ZeroOrder {
        order: cap,
        witness: None,
        cap_reached: true,
    })
}

/// `tau = m^{-1} (D^{u_1} a(1), ..., D^{u_s} a(1))`.
pub fn compute_tau(a: &Symbol, m: &DilationMatrix) -> Result<Vec<Rational>> {
    check_dim(a, m)?;
    let mm = Rational::from_integer(m.m().into());
    let value = a.eval_at_one();
    if value != mm {
        return Err(Error::NotNormalized { value, m: m.m() });
    }
    Ok((0..a.dim())
        .map(|l| a.eval_deriv_at_one(&MultiIndex::unit(a.dim(), l)) / &mm)
        .collect())
}

/// First failing condition among `|j| <= k`, or `None` if all hold.
pub fn check_reproduction_conditions(
    a: &Symbol,
    m: &DilationMatrix,
    tau: &[Rational],
    k: u32,
) -> Result<Option<Witness>> {
    check_dim(a, m)?;
    let dual = m.dual_points();
    for d in 0..=k {
        if let Some(w) = first_failure_of_order(a, m, tau, d, &dual) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn first_failure_of_order(a: &Symbol, m: &DilationMatrix, tau: &[Rational], d: u32, dual: &DualCosets) -> Option<Witness> {
    let mm = Rational::from_integer(m.m().into());
    for j in MultiIndex::of_order(a.dim(), d) {
        let value = a.eval_deriv_at_one(&j);
        let expected = &mm * falling_factorial(&j, tau);
        if value != expected {
            return Some(Witness {
                j,
                point: ConditionPoint::One,
                value: DerivValue::Rational(value),
                expected: Some(expected),
            });
        }
        if let Some(w) = epsilon_witness(a, &j, dual) {
            return Some(w);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReproductionDegree {
    /// `-1` when even constants are not reproduced.
    pub degree: i64,
    pub tau: Vec<Rational>,
    pub witness: Option<Witness>,
    pub cap_reached: bool,
}

/// Largest `k <= cap` for which all reproduction conditions with `|j| <= k`
/// hold. `tau` defaults to [`compute_tau`].
pub fn reproduction_degree(
    a: &Symbol,
    m: &DilationMatrix,
    tau: Option<&[Rational]>,
    cap: u32,
) -> Result<ReproductionDegree> {
    let computed = compute_tau(a, m)?;
    let tau = match tau {
        Some(t) if t.len() != a.dim() => {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: t.len(),
            })
        }
        Some(t) => t.to_vec(),
        None => computed,
    };
    let dual = m.dual_points();
    for d in 0..=cap {
        if let Some(w) = first_failure_of_order(a, m, &tau, d, &dual) {
            return Ok(ReproductionDegree {
                degree: d as i64 - 1,
                tau,
                witness: Some(w),
                cap_reached: false,
            });
        }
    }
    Ok(ReproductionDegree {
        degree: cap as i64,
        tau,
        witness: None,
        cap_reached: true,
    })
}

/// Axis-aligned integer box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: Index,
    pub hi: Index,
}

impl Window {
    pub fn cube(s: usize, r: i64) -> Self {
        Window {
            lo: vec![-r; s],
            hi: vec![r; s],
        }
    }

    pub fn points(&self) -> crate::lattice::BoxIter {
        crate::lattice::BoxIter::new(&self.lo, &self.hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentFailure {
    pub alpha: Index,
    pub j: MultiIndex,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentCheck {
    pub holds: bool,
    pub failure: Option<MomentFailure>,
}

fn monomial_power(v: &[Rational], j: &MultiIndex) -> Rational {
    v.iter()
        .zip(&j.0)
        .fold(Rational::one(), |acc, (x, &e)| acc * num_traits::pow(x.clone(), e as usize))
}

/// Checks, for every `alpha` in `window` and `|j| <= k`,
///
/// ```text
/// sum_beta a_{alpha - M beta} (M^{-r} beta)^j = (M^{-(r+1)} (alpha - tau))^j
/// ```
pub fn moment_condition_check(
    a: &Symbol,
    m: &DilationMatrix,
    tau: &[Rational],
    k: u32,
    r: u32,
    window: &Window,
) -> Result<MomentCheck> {
    check_dim(a, m)?;
    let inv_r = m.inverse_power(r);
    let inv_r1 = m.inverse_power(r + 1);
    let js = MultiIndex::up_to_order(a.dim(), k);
    for alpha in window.points() {
        // (M^{-r} beta, a_{alpha - M beta}) over the contributing beta
        let mut terms: Vec<(Vec<Rational>, &Rational)> = Vec::new();
        for (gamma, coeff) in a.terms() {
            let diff: Index = alpha.iter().zip(gamma).map(|(x, y)| x - y).collect();
            if let Some(beta) = m.lattice().coordinates(&diff) {
                terms.push((inv_r.mul_int_vec(&beta), coeff));
            }
        }
        let shifted: Vec<Rational> = alpha
            .iter()
            .zip(tau)
            .map(|(&x, t)| Rational::from_integer(x.into()) - t)
            .collect();
        let target = inv_r1.mul_vec(&shifted);
        for j in &js {
            let lhs = terms
                .iter()
                .fold(Rational::zero(), |acc, (v, c)| acc + *c * monomial_power(v, j));
            let rhs = monomial_power(&target, j);
            if lhs != rhs {
                return Ok(MomentCheck {
                    holds: false,
                    failure: Some(MomentFailure {
                        alpha,
                        j: j.clone(),
                        lhs,
                        rhs,
                    }),
                });
            }
        }
    }
    Ok(MomentCheck {
        holds: true,
        failure: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions {
    pub cap: u32,
    /// Overrides the computed `tau` for the reproduction check.
    pub tau: Option<Vec<Rational>>,
    /// Convergence is never verified; this flag is carried into the report.
    pub assumed_convergent: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            cap: DEFAULT_CAP,
            tau: None,
            assumed_convergent: true,
        }
    }
}

/// Everything known about a scheme: lattice data, zero-condition order,
/// `tau`, reproduction degree and the conditions that bound them.
#[derive(Clone, Debug, PartialEq)]
pub struct ReproductionReport {
    pub m: u64,
    pub dilation: IntMatrix,
    pub expanding: ExpandingCheck,
    pub cosets: CosetReps,
    pub dual: DualCosets,
    pub a_at_one: Rational,
    pub sum_rules: SumRules,
    pub zero_order: ZeroOrder,
    /// `None` when `a(1) != m`.
    pub tau: Option<Vec<Rational>>,
    /// `false` when Z_2 fails; `tau` is then not tied to linear reproduction.
    pub tau_meaningful: bool,
    pub tau_overridden: bool,
    pub reproduction: Option<ReproductionDegree>,
    /// Reported as the zero-condition order; a claim, not verified.
    pub claimed_approx_order: u32,
    pub assumed_convergent: bool,
    pub notes: Vec<String>,
}

impl ReproductionReport {
    pub fn k_z(&self) -> u32 {
        self.zero_order.order
    }

    pub fn k_r(&self) -> Option<i64> {
        self.reproduction.as_ref().map(|r| r.degree)
    }

    /// Distinct witnesses, zero-condition witness first.
    pub fn witnesses(&self) -> Vec<&Witness> {
        let mut out: Vec<&Witness> = self.zero_order.witness.iter().collect();
        if let Some(w) = self.reproduction.as_ref().and_then(|r| r.witness.as_ref()) {
            if !out.contains(&w) {
                out.push(w);
            }
        }
        out
    }
}

pub fn analyze(a: &Symbol, m: &DilationMatrix, options: &AnalysisOptions) -> Result<ReproductionReport> {
    check_dim(a, m)?;
    let zero_order = zero_condition_order(a, m, options.cap)?;
    let (tau, reproduction) = match compute_tau(a, m) {
        Ok(t) => {
            let used = options.tau.clone().unwrap_or(t);
            let rep = reproduction_degree(a, m, Some(&used), options.cap)?;
            (Some(used), Some(rep))
        }
        Err(Error::NotNormalized { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    if let (Some(r), false) = (&reproduction, zero_order.cap_reached) {
        debug_assert!(r.degree < zero_order.order as i64, "k_R must stay below k_Z");
    }

    let mut notes = Vec::new();
    let cosets = m.primal_cosets();
    let duplicates: Vec<String> = closed_tile_points(m)
        .into_iter()
        .filter(|p| !cosets.reps.contains(p))
        .map(|p| {
            let rep = m.lattice().reduce(&p);
            format!("{} ~ {}", fmt_index(&p), fmt_index(&rep))
        })
        .collect();
    if !duplicates.is_empty() {
        notes.push(format!(
            "closed tile M[0,1]^s has boundary points congruent to canonical representatives: {}",
            duplicates.join(", ")
        ));
    }
    if !m.expanding().exact {
        notes.push(format!(
            "expanding check is numeric (min |eigenvalue| = {:.12})",
            m.expanding().min_modulus
        ));
    }
    if !m.expanding().expanding {
        notes.push("dilation matrix is NOT expanding".into());
    }
    let tau_meaningful = zero_order.order >= 2;
    if tau.is_some() && !tau_meaningful {
        notes.push("Z_2 fails: tau is not reproduction-meaningful".into());
    }
    if tau.is_none() {
        notes.push(format!("a(1) = {} differs from m = {}", format_rational(&a.eval_at_one()), m.m()));
    }
    if zero_order.cap_reached || reproduction.as_ref().is_some_and(|r| r.cap_reached) {
        notes.push(format!("degree search reached the cap {}", options.cap));
    }

    Ok(ReproductionReport {
        m: m.m(),
        dilation: m.matrix().clone(),
        expanding: m.expanding().clone(),
        dual: m.dual_points(),
        cosets,
        a_at_one: a.eval_at_one(),
        sum_rules: sum_rules_check(a, m),
        claimed_approx_order: zero_order.order,
        zero_order,
        tau_overridden: options.tau.is_some(),
        tau,
        tau_meaningful,
        reproduction,
        assumed_convergent: options.assumed_convergent,
        notes,
    })
}

pub fn fmt_index(v: &[i64]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub fn fmt_rationals(v: &[Rational]) -> String {
    format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(","))
}

impl fmt::Display for ReproductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dilation M = {}", self.dilation)?;
        writeln!(f, "m = {}", self.m)?;
        writeln!(
            f,
            "E = {{{}}}",
            self.cosets.iter().map(|e| fmt_index(e)).collect::<Vec<_>>().join(", ")
        )?;
        writeln!(
            f,
            "Xi = {{{}}}",
            self.dual
                .points
                .iter()
                .map(|p| format!("{} = exp(2pi i*{})", p, fmt_rationals(p.exponents())))
                .collect::<Vec<_>>()
                .join(", ")
        )?;
        writeln!(f, "a(1) = {}", format_rational(&self.a_at_one))?;
        writeln!(f, "sum rules: {}", if self.sum_rules.holds { "hold" } else { "fail" })?;
        writeln!(f, "kZ = {}", self.k_z())?;
        if let Some(w) = &self.zero_order.witness {
            writeln!(f, "  zero-condition witness: {w}")?;
        }
        match &self.tau {
            Some(t) => writeln!(
                f,
                "tau = {}{}{}",
                fmt_rationals(t),
                if self.tau_overridden { " (override)" } else { "" },
                if self.tau_meaningful { "" } else { " (not reproduction-meaningful)" }
            )?,
            None => writeln!(f, "tau = undefined")?,
        }
        match &self.reproduction {
            Some(r) => {
                writeln!(f, "kR = {}", r.degree)?;
                if let Some(w) = &r.witness {
                    writeln!(f, "  reproduction witness: {w}")?;
                }
            }
            None => writeln!(f, "kR = undefined")?,
        }
        writeln!(f, "claimed approximation order = {} (not verified)", self.claimed_approx_order)?;
        writeln!(f, "assumed convergent = {}", self.assumed_convergent)?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
