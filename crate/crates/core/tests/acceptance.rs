//! Acceptance suite. Prints one PASS/FAIL line per criterion followed by the
//! individual checks, and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subdiv_core::analysis::{
    analyze, check_reproduction_conditions, compute_tau, moment_condition_check, reproduction_degree,
    zero_condition_order, AnalysisOptions, Window,
};
use subdiv_core::constructors::{
    affine_solver, box_combination, box_spline_symbol, builtin, builtin_symbols, combine, TauMode,
};
use subdiv_core::cyclotomic::{cyclotomic_polynomial, CycloValue};
use subdiv_core::lattice::{DilationMatrix, UnityPoint};
use subdiv_core::subdivision::{reproduction_oracle, PolySpec};
use subdiv_core::symbol::{falling_factorial_int, DerivValue, MultiIndex};
use subdiv_core::{rat, ratio, Index, Rational, Symbol};

/// Absolute tolerance for comparing exact cyclotomic values with their
/// floating-point images.
const FLOAT_TOL: f64 = 1e-9;
const ORACLE_STEPS: u32 = 3;
const ORACLE_BOX: i64 = 8;
const MAX_MONOMIAL_DEGREE: u32 = 4;
const RANDOM_MASKS: usize = 1_000;
const CYCLO_SAMPLES: usize = 10_000;
const SEED: u64 = 0x5eed_2024;

struct Criterion {
    checks: Vec<(String, bool)>,
    info: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Criterion {
            checks: Vec::new(),
            info: Vec::new(),
        }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn info(&mut self, what: impl Into<String>) {
        self.info.push(what.into());
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn two_i() -> DilationMatrix {
    DilationMatrix::scalar(2, 2).unwrap()
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new();
    let b = builtin("sqrt3-approx").unwrap();
    let rep = analyze(&b.symbol, &b.dilation, &AnalysisOptions::default()).unwrap();
    c.check(format!("m = 3 (got {})", rep.m), rep.m == 3);
    c.check(format!("kZ = 2 (got {})", rep.k_z()), rep.k_z() == 2);
    c.check(format!("tau = (0,0) (got {:?})", rep.tau.as_ref().map(|t| fmt(t))), rep.tau == Some(q(&[0, 0])));
    c.check(format!("kR = 1 (got {:?})", rep.k_r()), rep.k_r() == Some(1));
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new();
    let b = builtin("sqrt3-interp").unwrap();
    let a = &b.symbol;
    c.check("coefficient at 0 is 1", a.coeff(&[0, 0]) == Some(&rat(1)));
    let sub = a.submask_symbol(&[0, 0], &b.dilation);
    c.check("submask at e = 0 is the monomial 1", sub == Symbol::constant(2, rat(1)));
    let rep = analyze(a, &b.dilation, &AnalysisOptions::default()).unwrap();
    c.check(format!("kZ >= 3 (got {})", rep.k_z()), rep.k_z() >= 3);
    c.check(format!("tau = (0,0) (got {:?})", rep.tau.as_ref().map(|t| fmt(t))), rep.tau == Some(q(&[0, 0])));
    let kr = rep.k_r().unwrap_or(-1);
    c.check(format!("kR >= 2 (got {kr})"), kr >= 2);
    let all3 = check_reproduction_conditions(a, &b.dilation, &q(&[0, 0]), 3).unwrap();
    c.info(format!(
        "kR = 3? {}; conditions for all |j| <= 3: {}",
        if kr == 3 { "yes" } else { "no" },
        match &all3 {
            None => "hold".to_string(),
            Some(w) => format!("fail at {w}"),
        }
    ));
    let all2 = check_reproduction_conditions(a, &b.dilation, &q(&[0, 0]), 2).unwrap();
    c.info(format!("conditions for all |j| <= 2 (|j| < 3): {}", if all2.is_none() { "hold" } else { "fail" }));
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new();
    let b = builtin("tile-2120-conv2").unwrap();
    let m = &b.dilation;
    let e = m.primal_cosets().reps;
    c.check(format!("|E| = 4 (got {})", e.len()), e.len() == 4);
    let want: Vec<Index> = vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1]];
    c.check(format!("E = {want:?} (got {e:?})"), e == want);

    let rep = analyze(&b.symbol, m, &AnalysisOptions::default()).unwrap();
    let noted = rep.notes.iter().any(|n| n.contains("(1,2) ~ (0,0)"));
    c.check("report notes (1,2) congruent to (0,0)", noted);

    // exponents of exp(2 pi i x): 1 -> 0, -1 -> 1/2, i -> 1/4, -i -> 3/4
    let h = ratio(1, 2);
    let mut want_xi = vec![
        UnityPoint::new(vec![rat(0), rat(0)]),
        UnityPoint::new(vec![rat(0), h.clone()]),
        UnityPoint::new(vec![h.clone(), ratio(1, 4)]),
        UnityPoint::new(vec![h, ratio(3, 4)]),
    ];
    let mut got_xi = m.dual_points().points;
    want_xi.sort_by(|x, y| x.exponents().cmp(y.exponents()));
    got_xi.sort_by(|x, y| x.exponents().cmp(y.exponents()));
    c.check(
        format!(
            "Xi = {{(1,1),(1,-1),(-1,i),(-1,-i)}} (got {})",
            got_xi.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
        ),
        got_xi == want_xi,
    );

    c.check(format!("kZ = 2 (got {})", rep.k_z()), rep.k_z() == 2);
    let w = rep.zero_order.witness.clone();
    let ok_w = w.as_ref().is_some_and(|w| {
        let at = m.dual_points().points[w.epsilon_index()].clone();
        w.j == MultiIndex(vec![0, 2])
            && at == UnityPoint::new(vec![rat(0), ratio(1, 2)])
            && match &w.value {
                DerivValue::Rational(v) => *v == rat(2),
                DerivValue::Cyclo(v) => v.as_rational() == Some(rat(2)),
            }
    });
    c.check(
        format!("witness j = (0,2), eps = (1,-1), value 2 (got {})", w.map(|w| w.to_string()).unwrap_or_default()),
        ok_w,
    );
    c.check(format!("tau = (2,1) (got {:?})", rep.tau.as_ref().map(|t| fmt(t))), rep.tau == Some(q(&[2, 1])));
    c.check(format!("kR = 1 (got {:?})", rep.k_r()), rep.k_r() == Some(1));
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new();
    let m = two_i();
    let tau = q(&[1, 1]);
    let names = ["B221", "B212", "B122", "B330"];
    let parts = [(2, 2, 1), (2, 1, 2), (1, 2, 2), (3, 3, 0)];
    let syms: Vec<Symbol> = parts.iter().map(|&(h, i, j)| box_spline_symbol(h, i, j)).collect();
    for (name, a) in names.iter().zip(&syms) {
        let z = zero_condition_order(a, &m, 8).unwrap().order;
        c.check(format!("{name}: kZ = 3 (got {z})"), z == 3);
        let fail = check_reproduction_conditions(a, &m, &tau, 3).unwrap();
        c.check(format!("{name}: conditions for |j| <= 3, tau = (1,1) fail"), fail.is_some());
    }
    let lam = q(&[5, -1, -1, -2]);
    let comb = combine(&syms, &lam).unwrap();
    c.check("combination equals 5 B221 - B212 - B122 - 2 B330", comb == box_combination());
    let t = compute_tau(&comb, &m).unwrap();
    c.check(format!("combination: computed tau = (1,1) (got {})", fmt(&t)), t == tau);
    let w3 = check_reproduction_conditions(&comb, &m, &tau, 3).unwrap();
    c.check(
        format!(
            "combination: conditions for |j| <= 3 hold with tau = (1,1){}",
            w3.as_ref().map(|w| format!(" (first failure: {w})")).unwrap_or_default()
        ),
        w3.is_none(),
    );
    let sol3 = affine_solver(&syms, &m, 3, &TauMode::Fixed(tau.clone()));
    c.check(
        format!(
            "affine_solver(k = 3, tau = (1,1)) contains (5,-1,-1,-2){}",
            match &sol3 {
                Ok(_) => String::new(),
                Err(e) => format!(" (solver: {e})"),
            }
        ),
        sol3.as_ref().is_ok_and(|s| s.contains(&lam)),
    );

    // the same conditions read as |j| < 3
    let w2 = check_reproduction_conditions(&comb, &m, &tau, 2).unwrap();
    c.info(format!("combination, |j| <= 2: {}", if w2.is_none() { "hold" } else { "fail" }));
    for (name, a) in names.iter().zip(&syms) {
        let f = check_reproduction_conditions(a, &m, &tau, 2).unwrap();
        c.info(format!("{name}, |j| <= 2, tau = (1,1): {}", if f.is_none() { "hold" } else { "fail" }));
    }
    match affine_solver(&syms, &m, 2, &TauMode::Fixed(tau)) {
        Ok(s) => c.info(format!(
            "affine_solver(k = 2): basepoint {}, {} free direction(s), contains (5,-1,-1,-2): {}",
            fmt(&s.basepoint),
            s.free_count(),
            s.contains(&lam)
        )),
        Err(e) => c.info(format!("affine_solver(k = 2): {e}")),
    }
    let kr = reproduction_degree(&comb, &m, None, 8).unwrap().degree;
    c.info(format!("combination: kR = {kr}"));
    c
}

fn monomials(s: usize, d: u32) -> Vec<Vec<u32>> {
    MultiIndex::of_order(s, d).into_iter().map(|j| j.0).collect()
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new();
    for b in builtin_symbols() {
        let m = &b.dilation;
        let s = m.dim();
        let r = reproduction_degree(&b.symbol, m, None, 16).unwrap();
        let kr = r.degree;
        let window = Window::cube(s, ORACLE_BOX);
        let mut agree = true;
        let mut per_degree = true;
        let mut detail = Vec::new();
        for d in 0..=MAX_MONOMIAL_DEGREE {
            let mut all_pass = true;
            for e in monomials(s, d) {
                let pi = PolySpec::monomial(&e);
                let v = reproduction_oracle(&b.symbol, m, &r.tau, &pi, ORACLE_STEPS, &window).unwrap();
                all_pass &= v.pass;
                if v.pass != (d as i64 <= kr) {
                    agree = false;
                    detail.push(format!("x^{e:?}: oracle {}", if v.pass { "PASS" } else { "FAIL" }));
                }
            }
            per_degree &= all_pass == (d as i64 <= kr);
        }
        c.check(
            format!("{}: oracle PASS <=> degree <= kR = {kr}, per monomial{}", b.name, suffix(&detail)),
            agree,
        );
        if !agree {
            c.info(format!(
                "{}: all monomials of degree d pass <=> d <= kR: {}",
                b.name,
                if per_degree { "holds" } else { "does not hold" }
            ));
        }
        let moment_window = Window::cube(s, ORACLE_BOX);
        let mut ks = vec![kr.max(0) as u32];
        if kr >= 0 {
            ks.push(kr as u32 + 1);
        }
        for k in ks {
            let algebraic = check_reproduction_conditions(&b.symbol, m, &r.tau, k).unwrap().is_none();
            for level in 0..=2 {
                let mc = moment_condition_check(&b.symbol, m, &r.tau, k, level, &moment_window).unwrap();
                c.check(
                    format!(
                        "{}: moment check k = {k}, r = {level} ({}) agrees with conditions ({})",
                        b.name,
                        verdict(mc.holds),
                        verdict(algebraic)
                    ),
                    mc.holds == algebraic,
                );
            }
        }
    }
    c
}

fn suffix(detail: &[String]) -> String {
    if detail.is_empty() {
        String::new()
    } else {
        format!(" [{}]", detail.join("; "))
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "hold"
    } else {
        "fail"
    }
}

fn random_symbol(rng: &mut ChaCha8Rng, s: usize) -> Symbol {
    let n = rng.gen_range(1..=8);
    let terms: Vec<(Index, Rational)> = (0..n)
        .map(|_| {
            let idx = (0..s).map(|_| rng.gen_range(-4..=4)).collect();
            (idx, ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6)))
        })
        .collect();
    Symbol::from_terms(s, terms).unwrap()
}

fn float_deriv(a: &Symbol, j: &MultiIndex, z: &[Complex64]) -> Complex64 {
    a.terms()
        .map(|(k, v)| {
            let q = falling_factorial_int(j, k) as f64;
            let mono: Complex64 = k.iter().zip(&j.0).zip(z).map(|((&e, &ji), zi)| zi.powi((e - ji as i64) as i32)).product();
            mono * q * num_traits::ToPrimitive::to_f64(v).unwrap()
        })
        .sum()
}

fn battery() -> Vec<(&'static str, Vec<Vec<i64>>)> {
    vec![
        ("2I", vec![vec![2, 0], vec![0, 2]]),
        ("3I", vec![vec![3, 0], vec![0, 3]]),
        ("[[2,1],[0,2]]", vec![vec![2, 1], vec![0, 2]]),
        ("[[1,2],[-2,-1]]", vec![vec![1, 2], vec![-2, -1]]),
        ("quincunx [[1,-1],[1,1]]", vec![vec![1, -1], vec![1, 1]]),
    ]
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mats: Vec<DilationMatrix> = battery().iter().map(|(_, m)| DilationMatrix::new(m).unwrap()).collect();

    let mut agree = 0;
    for _ in 0..RANDOM_MASKS {
        let s = rng.gen_range(1..=3);
        let a = random_symbol(&mut rng, s);
        let j = MultiIndex((0..s).map(|_| rng.gen_range(0..=3)).collect());
        let direct = a.terms().fold(Rational::zero(), |acc, (k, v)| {
            acc + v * Rational::from_integer(falling_factorial_int(&j, k).into())
        });
        let mut ok = direct == a.formal_derivative(&j).eval_at_one() && direct == a.eval_deriv_at_one(&j);
        if s == 2 {
            let m = &mats[rng.gen_range(0..mats.len())];
            for (_, p) in m.dual_points().nontrivial() {
                let exact = a.eval_deriv_at_point(&j, p).to_complex();
                let float = float_deriv(&a, &j, &p.to_complex());
                ok &= (exact - float).norm() <= FLOAT_TOL * (1.0 + float.norm());
            }
        }
        agree += ok as usize;
    }
    c.check(format!("derivative algorithms agree on {agree}/{RANDOM_MASKS} random masks"), agree == RANDOM_MASKS);

    let mut partition_ok = true;
    for m in &mats {
        for _ in 0..50 {
            let a = random_symbol(&mut rng, 2);
            let parts = a.submask_decomposition(&m.primal_cosets().reps, m).unwrap();
            let sum = parts.iter().fold(Symbol::zero(2), |acc, p| acc.try_add(p).unwrap());
            let disjoint: usize = parts.iter().map(Symbol::len).sum();
            partition_ok &= sum == a && disjoint == a.len();
        }
    }
    c.check("submasks partition the mask", partition_ok);

    for ((name, rows), m) in battery().iter().zip(&mats) {
        let e = m.primal_cosets().reps;
        let xi = m.dual_points();
        let mm = m.m() as usize;
        // brute force: count distinct classes among a box of integer points
        let mut classes: Vec<Index> = Vec::new();
        for x in -4..=4i64 {
            for y in -4..=4i64 {
                let v = vec![x, y];
                if !classes.iter().any(|w| m.lattice().congruent(w, &v)) {
                    classes.push(v);
                }
            }
        }
        let det = (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]).unsigned_abs() as usize;
        let distinct = e.iter().enumerate().all(|(i, a)| e[..i].iter().all(|b| !m.lattice().congruent(a, b)));
        c.check(
            format!("{name}: |E| = |Xi| = m = {det} (got {}, {}, {mm}; brute force {})", e.len(), xi.points.len(), classes.len()),
            e.len() == det && xi.points.len() == det && mm == det && classes.len() == det && distinct,
        );
    }

    let mut consistent = 0;
    let mut zeros = 0;
    for i in 0..CYCLO_SAMPLES {
        let n: u64 = rng.gen_range(1..=24);
        let mut v = CycloValue::zero(n);
        if i % 2 == 0 {
            // multiple of Phi_N, hence zero
            let phi = cyclotomic_polynomial(n);
            let f: Vec<i64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(-5..=5)).collect();
            for (a, fa) in f.iter().enumerate() {
                for (b, pb) in phi.iter().enumerate() {
                    v.add_term((a + b) as u64, &(Rational::from_integer(pb.clone()) * rat(*fa)));
                }
            }
        } else {
            for t in 0..n {
                if rng.gen_bool(0.5) {
                    v.add_term(t, &ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
                }
            }
        }
        let exact = v.is_zero();
        zeros += exact as usize;
        if exact == (v.to_complex().norm() < FLOAT_TOL) {
            consistent += 1;
        }
    }
    c.check(
        format!("cyclotomic is_zero matches |value| < {FLOAT_TOL:e} on {consistent}/{CYCLO_SAMPLES} samples ({zeros} zeros)"),
        consistent == CYCLO_SAMPLES,
    );
    c
}

type Check = fn() -> Criterion;

fn fmt(v: &[Rational]) -> String {
    subdiv_core::analysis::fmt_rationals(v)
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 6] = [
        ("1 sqrt(3) approximating scheme", criterion_1),
        ("2 sqrt(3) interpolatory scheme", criterion_2),
        ("3 dilation [[2,1],[0,2]], tile convolution", criterion_3),
        ("4 box-spline combination", criterion_4),
        ("5 oracle and moment checks agree with kR", criterion_5),
        ("6 property suites", criterion_6),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let c = run();
        let secs = start.elapsed().as_secs_f64();
        let ok = c.passed();
        failed += !ok as usize;
        println!("{} criterion {name} ({secs:.1}s)", if ok { "PASS" } else { "FAIL" });
        for (what, ok) in &c.checks {
            println!("    [{}] {what}", if *ok { "ok" } else { "FAILED" });
        }
        for line in &c.info {
            println!("    [info] {line}");
        }
    }
    println!("{} of 6 criteria passed", 6 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

