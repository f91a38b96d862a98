//! Seeded property checks across all modules.
//!
//! Each check returns a [`Check`] summarising how many cases ran, how many
//! failed and the worst observed deviation. [`run_all`] is what the CLI's
//! `verify` subcommand executes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::{Float, Rational};
use serde::Serialize;

use crate::coeffs::{
    a_coeffs_exact, asym_log, c_coeffs, CoeffValues, g_poly, g_poly_exact, remainder_bound, sigma_coeffs_exact,
    sigma_half_recurrence,
};
use crate::complexfn::{digamma, gamma, pochhammer, ComplexVal, EULER_GAMMA};
use crate::engine::{eval_auto, eval_generic, gauss_value, Tolerance};
use crate::error::Result;
use crate::landau::{landau_asymptotic, landau_ck, landau_direct, landau_nemes, landau_theorem3, landau_watson};
use crate::oracle::{compare, oracle_eval, Hp, OracleRequest, OracleValue};
use crate::params::{ExcessKind, ParamSet};
use crate::table1;

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    /// Largest deviation seen, in the check's own measure.
    pub worst: f64,
    pub detail: String,
}

/// Accumulates cases for one check.
#[derive(Debug)]
struct Tally {
    name: String,
    cases: usize,
    failures: usize,
    worst: f64,
    first_failure: Option<String>,
    note: Option<String>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), cases: 0, failures: 0, worst: 0.0, first_failure: None, note: None }
    }

    /// Record a deviation `dev` against `limit`; NaN counts as a failure.
    fn record(&mut self, dev: f64, limit: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        if dev.is_nan() || dev > self.worst {
            self.worst = dev;
        }
        if dev.is_nan() || dev > limit {
            self.fail(what);
        }
    }

    fn record_bool(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(what);
        }
    }

    fn record_err(&mut self, e: crate::Error, what: impl FnOnce() -> String) {
        self.cases += 1;
        self.fail(|| format!("{}: {e}", what()));
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    fn finish(self) -> Check {
        let passed = self.failures == 0 && self.cases > 0;
        let mut detail = match self.first_failure {
            Some(f) => format!("{} of {} failed; first: {f}", self.failures, self.cases),
            None if self.cases == 0 => "no cases ran".into(),
            None => format!("{} cases", self.cases),
        };
        if let Some(note) = self.note {
            detail = format!("{detail}; {note}");
        }
        Check { name: self.name, passed, cases: self.cases, failures: self.failures, worst: self.worst, detail }
    }
}

/// Options for [`run_all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random parameter sets per engine check.
    pub cases: usize,
    /// Oracle precision.
    pub digits: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 1, cases: 500, digits: 40 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(x: ComplexVal, y: ComplexVal) -> f64 {
    (x - y).norm() / y.norm()
}

/// Distance from `z` to the nearest nonpositive integer.
pub fn pole_distance(z: ComplexVal) -> f64 {
    let k = z.re.round().min(0.0);
    (z - k).norm()
}

/// Uniform point in the disk `|z| <= r`; real with probability 1/2.
fn point_in_disk(rng: &mut impl Rng, r: f64) -> ComplexVal {
    if rng.random_bool(0.5) {
        return ComplexVal::new(rng.random_range(-r..=r), 0.0);
    }
    loop {
        let z = ComplexVal::new(rng.random_range(-r..=r), rng.random_range(-r..=r));
        if z.norm() <= r {
            return z;
        }
    }
}

/// Random valid parameters with `|a|, |b|, |c| <= 5` and `a, b, c, c-a,
/// c-b` at least `0.1` from the nonpositive integers. Half of the draws
/// have an integer excess in `-3..=3`.
pub fn random_params(rng: &mut impl Rng) -> ParamSet {
    random_params_within(rng, 5.0)
}

/// [`random_params`] with `|a|, |b|, |c| <= radius`.
pub fn random_params_within(rng: &mut impl Rng, radius: f64) -> ParamSet {
    loop {
        let a = point_in_disk(rng, radius);
        let b = point_in_disk(rng, radius);
        let c = if rng.random_bool(0.5) {
            point_in_disk(rng, radius)
        } else {
            a + b + rng.random_range(-3i32..=3) as f64
        };
        if c.norm() > radius {
            continue;
        }
        if [a, b, c, c - a, c - b].iter().all(|&z| pole_distance(z) >= 0.1) {
            if let Ok(p) = ParamSet::new(a, b, c) {
                return p;
            }
        }
    }
}

/// Random case with `s = -m` and `a` or `b` equal to `p` in `1..=m`.
pub fn random_degenerate(rng: &mut impl Rng) -> ParamSet {
    loop {
        let m = rng.random_range(1u32..=4);
        let p = rng.random_range(1..=m) as f64;
        let other = point_in_disk(rng, 4.0);
        let c = other + p - m as f64;
        if [other, c, other - m as f64].iter().any(|&z| pole_distance(z) < 0.1) {
            continue;
        }
        let (a, b) = if rng.random_bool(0.5) { (ComplexVal::new(p, 0.0), other) } else { (other, ComplexVal::new(p, 0.0)) };
        if let Ok(ps) = ParamSet::new(a, b, c) {
            if matches!(ps.classify().kind, ExcessKind::DegenerateNegInteger { .. }) {
                return ps;
            }
        }
    }
}

/// Random `z` with `|Re z|, |Im z| <= 20`, at least `0.1` from the poles.
fn random_strip_point(rng: &mut impl Rng) -> ComplexVal {
    loop {
        let z = ComplexVal::new(rng.random_range(-20.0..=20.0), rng.random_range(-20.0..=20.0));
        if pole_distance(z) >= 0.1 && pole_distance(z + 1.0) >= 0.1 {
            return z;
        }
    }
}

fn describe(p: &ParamSet) -> String {
    format!("a={} b={} c={}", p.a(), p.b(), p.c())
}

/// `Γ(z+1) = zΓ(z)` and `ψ(z+1) = ψ(z) + 1/z` at `points` random points.
pub fn kernel_recurrence(seed: u64, points: usize) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("kernel_recurrence");
    for _ in 0..points {
        let z = random_strip_point(&mut rng);
        match (gamma(z), gamma(z + 1.0), digamma(z), digamma(z + 1.0)) {
            (Ok(g0), Ok(g1), Ok(p0), Ok(p1)) => {
                t.record((g1 - z * g0).norm() / g1.norm(), 1e-12, || format!("gamma at {z}"));
                let dev = (p1 - p0 - z.inv()).norm() / (1.0 + p1.norm());
                t.record(dev, 1e-12, || format!("digamma at {z}"));
            }
            _ => t.record_bool(false, || format!("kernel error at {z}")),
        }
    }
    t.finish()
}

/// `Γ(z̄) = conj Γ(z)` and `ψ(z̄) = conj ψ(z)` bit for bit.
pub fn kernel_conjugate(seed: u64, points: usize) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("kernel_conjugate");
    for _ in 0..points {
        let z = random_strip_point(&mut rng);
        let ok = matches!((gamma(z), gamma(z.conj())), (Ok(x), Ok(y)) if x.conj() == y)
            && matches!((digamma(z), digamma(z.conj())), (Ok(x), Ok(y)) if x.conj() == y);
        t.record_bool(ok, || format!("z = {z}"));
    }
    t.finish()
}

/// Kernel `Γ` and `ψ` against the oracle to relative `1e-13`.
pub fn kernel_oracle(seed: u64, points: usize, digits: u32) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("kernel_oracle");
    for _ in 0..points {
        let z = random_strip_point(&mut rng);
        for (name, req, v) in [
            ("gamma", OracleRequest::Gamma(z), gamma(z)),
            ("digamma", OracleRequest::Digamma(z), digamma(z)),
        ] {
            match (v, oracle_eval(req, digits)) {
                (Ok(v), Ok(r)) => t.record(compare(v, &r).rel_err, 1e-13, || format!("{name} at {z}")),
                (Err(e), _) | (_, Err(e)) => t.record_err(e, || format!("{name} at {z}")),
            }
        }
    }
    t.finish()
}

/// `ψ(1) = -γ` to `1e-13`.
pub fn digamma_at_one() -> Check {
    let mut t = Tally::new("digamma_at_one");
    match digamma(ComplexVal::new(1.0, 0.0)) {
        Ok(v) => t.record((v.re + EULER_GAMMA).abs() + v.im.abs(), 1e-13, || format!("psi(1) = {v}")),
        Err(e) => t.record_err(e, || "psi(1)".into()),
    }
    t.finish()
}

/// `(z)_{j+k} = (z)_j (z+j)_k`.
pub fn pochhammer_split(seed: u64, cases: usize) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("pochhammer_split");
    for _ in 0..cases {
        let z = point_in_disk(&mut rng, 5.0);
        if pole_distance(z) < 0.1 {
            continue;
        }
        let j = rng.random_range(0u64..80);
        let k = rng.random_range(0u64..80);
        let lhs = pochhammer(z, j + k);
        let rhs = pochhammer(z, j) * pochhammer(z + j as f64, k);
        t.record(rel(rhs, lhs), 1e-13, || format!("z={z} j={j} k={k}"));
    }
    t.finish()
}

/// Relative accuracy of `S_1 = 1` when the evaluation claims no worse.
pub const N1_TOL: f64 = 1e-13;

/// Every branch gives `S_1 = 1`.
pub fn n1_identity(seed: u64, cases: usize) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("n1_identity");
    let tol = Tolerance::default();
    for _ in 0..cases {
        let p = random_params(&mut rng);
        match eval_auto(&p, 1, &tol) {
            // At n = 1 the expansions can cancel by many orders (the generic
            // tail reaches 1e9 for some parameters); the identity is held to
            // 1e-13 or to the reported error, whichever is larger.
            Ok(r) => {
                let limit = N1_TOL.max(r.est_error);
                t.record(rel(r.value, ComplexVal::new(1.0, 0.0)), limit, || describe(&p))
            }
            Err(e) => t.record_err(e, || describe(&p)),
        }
    }
    t.finish()
}

/// `eval_auto` against oracle partial sums.
pub fn oracle_equivalence(seed: u64, cases: usize, ns: &[u64], digits: u32, limit: f64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("oracle_equivalence");
    let tol = Tolerance::default();
    for _ in 0..cases {
        let p = random_params(&mut rng);
        for &n in ns {
            let what = || format!("{} n={n}", describe(&p));
            match (eval_auto(&p, n, &tol), crate::oracle::partial_sum_ref(&p, n, digits)) {
                (Ok(v), Ok(r)) => t.record(compare(v.value, &r).rel_err, limit, what),
                (Err(e), _) | (_, Err(e)) => t.record_err(e, what),
            }
        }
    }
    t.finish()
}

/// The conjectured degenerate-case formula against the oracle.
pub fn conjecture(seed: u64, cases: usize, ns: &[u64], digits: u32, limit: f64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("conjecture");
    let tol = Tolerance::default();
    for _ in 0..cases {
        let p = random_degenerate(&mut rng);
        for &n in ns {
            let what = || format!("{} n={n}", describe(&p));
            match (eval_auto(&p, n, &tol), crate::oracle::partial_sum_ref(&p, n, digits)) {
                (Ok(v), Ok(r)) => t.record(compare(v.value, &r).rel_err, limit, what),
                (Err(e), _) | (_, Err(e)) => t.record_err(e, what),
            }
        }
    }
    t.finish()
}

/// `S_{n+1} - S_n` equals the `n`-th series term.
pub fn incremental_consistency(seed: u64, cases: usize) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("incremental_consistency");
    let tol = Tolerance::default();
    for _ in 0..cases {
        let p = random_params(&mut rng);
        let n = rng.random_range(1u64..200);
        let (a, b, c) = (p.a(), p.b(), p.c());
        let term = (0..n).fold(ComplexVal::new(1.0, 0.0), |t, j| {
            let j = j as f64;
            t * (a + j) * (b + j) / ((c + j) * (j + 1.0))
        });
        let what = || format!("{} n={n}", describe(&p));
        match (eval_auto(&p, n, &tol), eval_auto(&p, n + 1, &tol)) {
            // the difference of two values of size |S| resolves the term only
            // down to eps·|S|, so the error is measured against the larger
            (Ok(x), Ok(y)) => {
                let scale = term.norm().max(x.value.norm()).max(y.value.norm());
                t.record((y.value - x.value - term).norm() / scale, 1e-10, what)
            }
            (Err(e), _) | (_, Err(e)) => t.record_err(e, what),
        }
    }
    t.finish()
}

/// For `Re s > 0` the distance to the Gauss value shrinks from `n = 20`
/// to `n = 160`. With small `Re s` and large `Im s` the decay may not have
/// set in by `n = 160`; such cases pass only if the oracle partial sums
/// show the same ordering.
pub fn gauss_limit(seed: u64, cases: usize, digits: u32) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("gauss_limit");
    let tol = Tolerance::default();
    let mut preasymptotic = 0;
    let mut done = 0;
    while done < cases {
        let p = random_params(&mut rng);
        if p.s().re <= 0.05 || p.classify().kind != ExcessKind::Generic {
            continue;
        }
        done += 1;
        let what = || describe(&p);
        let res = (|| -> Result<(f64, f64)> {
            let g = gauss_value(&p)?;
            let e20 = (eval_generic(&p, 20, &tol)?.value - g).norm();
            let e160 = (eval_generic(&p, 160, &tol)?.value - g).norm();
            Ok((e20, e160))
        })();
        match res {
            Ok((e20, e160)) if e160 < e20 => t.record_bool(true, what),
            Ok(_) => {
                let truth = (|| -> Result<bool> {
                    let g = gauss_value(&p)?;
                    let d = |n| -> Result<f64> {
                        let r = crate::oracle::partial_sum_ref(&p, n, digits)?;
                        Ok((r.to_complex() - g).norm())
                    };
                    Ok(d(160)? >= d(20)?)
                })();
                match truth {
                    Ok(true) => {
                        preasymptotic += 1;
                        t.record_bool(true, what)
                    }
                    Ok(false) => t.record_bool(false, what),
                    Err(e) => t.record_err(e, what),
                }
            }
            Err(e) => t.record_err(e, what),
        }
    }
    if preasymptotic > 0 {
        t.note = Some(format!("{preasymptotic} cases not yet decaying at n = 160, confirmed by the oracle"));
    }
    t.finish()
}

/// Results for `s = 1 ± 1e-6` stay within `1e-4` of the `s = 1` value.
pub fn branch_continuity(seed: u64, cases: usize) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::new("branch_continuity");
    let tol = Tolerance::default();
    let mut done = 0;
    while done < cases {
        let p = random_params(&mut rng);
        let c = p.a() + p.b() + 1.0;
        let sets = [c, c + 1e-6, c - 1e-6].map(|c| ParamSet::new(p.a(), p.b(), c));
        let [Ok(exact), Ok(up), Ok(down)] = sets else { continue };
        if [exact.c(), exact.c() - p.a(), exact.c() - p.b()].iter().any(|&z| pole_distance(z) < 0.1) {
            continue;
        }
        done += 1;
        let what = || describe(&exact);
        let vals = [exact, up, down].map(|q| eval_auto(&q, 20, &tol));
        match vals {
            [Ok(x), Ok(y), Ok(z)] => {
                let dev = rel(y.value, x.value).max(rel(z.value, x.value));
                t.record(dev, 1e-4, what);
            }
            [Err(e), ..] | [_, Err(e), _] | [.., Err(e)] => t.record_err(e, what),
        }
    }
    t.finish()
}

/// Pairwise agreement of the direct sum, Watson's series, the inverse
/// factorial expansion and the finite expansion with `M` orders.
pub fn landau_agreement(ns: &[u64], m: u64, limit: f64) -> Check {
    let mut t = Tally::new("landau_agreement");
    let tol = Tolerance::default();
    t.record_bool(landau_direct(0).ok() == Some(1.0), || "G_0 != 1".into());
    t.record_bool(landau_direct(1).ok() == Some(1.25), || "G_1 != 5/4".into());
    for &n in ns {
        let vals: [(&str, Result<f64>); 4] = [
            ("direct", landau_direct(n)),
            ("watson", landau_watson(n, &tol)),
            ("ck", landau_ck(n, &tol)),
            ("thm3", landau_theorem3(n, m).map(|v| v.0)),
        ];
        for i in 0..4 {
            for j in i + 1..4 {
                let what = || format!("n={n} {} vs {}", vals[i].0, vals[j].0);
                match (&vals[i].1, &vals[j].1) {
                    (Ok(x), Ok(y)) => t.record((x / y - 1.0).abs(), limit, what),
                    (Err(e), _) | (_, Err(e)) => t.record_err(e.clone(), what),
                }
            }
        }
    }
    t.finish()
}

/// `|G_{N-1} - finite expansion| <= bound` for `N > 2M`.
pub fn landau_bound() -> Check {
    let mut t = Tally::new("landau_bound");
    for m in 1u64..=10 {
        for big_n in [2 * m + 1, 3 * m, 50, 100, 200] {
            if big_n <= 2 * m {
                continue;
            }
            let what = || format!("N={big_n} M={m}");
            match (landau_theorem3(big_n - 1, m), oracle_eval(OracleRequest::Landau(big_n - 1), 40)) {
                (Ok((v, bound)), Ok(r)) => {
                    let err = compare(ComplexVal::new(v, 0.0), &r).abs_err;
                    // the f64 evaluation cannot resolve errors below its own rounding
                    t.record(err / (bound + 4.0 * f64::EPSILON * v), 1.0, what);
                }
                (Err(e), _) | (_, Err(e)) => t.record_err(e, what),
            }
        }
    }
    t.finish()
}

/// `G_n` increases and `G_n - log(n+1)/π` stays in `[1, (γ + 4 log 2)/π]`.
pub fn landau_growth() -> Check {
    let mut t = Tally::new("landau_growth");
    let upper = crate::landau::C0_HALF;
    let mut prev = 0.0;
    let ns = (0u64..=2000).chain((2100..=10_000).step_by(100));
    for n in ns {
        match landau_direct(n) {
            Ok(g) => {
                t.record_bool(g > prev, || format!("G_{n} <= previous"));
                let d = g - ((n + 1) as f64).ln() / std::f64::consts::PI;
                t.record_bool((1.0 - 1e-12..=upper + 1e-12).contains(&d), || format!("G_{n} offset {d}"));
                prev = g;
            }
            Err(e) => t.record_err(e, || format!("n={n}")),
        }
    }
    t.finish()
}

fn q(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

/// Printed coefficient lists in exact arithmetic.
pub fn coefficient_golden(seed: u64) -> Check {
    let mut t = Tally::new("coefficient_golden");
    let half = q(1, 2);
    let sigma_printed = [q(3, 1), q(23, 6), q(43, 10), q(647, 140), q(6131, 1260), q(70171, 13860)];
    match sigma_coeffs_exact(&half, &half, 6) {
        Ok(s) => t.record_bool(s == sigma_printed, || format!("sigma(1/2,1/2) = {s:?}")),
        Err(e) => t.record_err(e, || "sigma".into()),
    }
    match sigma_coeffs_exact(&half, &half, 10) {
        Ok(s) => t.record_bool(s == sigma_half_recurrence(10), || "sigma recurrence".into()),
        Err(e) => t.record_err(e, || "sigma".into()),
    }
    let c_printed = [q(3, 4), q(7, 64), q(-3, 128), q(-91, 8192), q(75, 8192), q(641, 131072)];
    let c = c_coeffs();
    t.record_bool(c.exact() == Some(&c_printed[..]), || "C_k list".into());
    let a = a_coeffs_exact(&half, &half);
    let reduces = a.iter().zip(&c_printed).all(|(x, y)| Rational::from(-x) == *y);
    t.record_bool(reduces, || format!("A_k(1/2,1/2) = {a:?}"));
    let mut rng = rng(seed);
    for _ in 0..100 {
        let h = q(rng.random_range(1..1500), 1000);
        let mirror = q(3, 2) - h.clone();
        for k in 1..=3 {
            let ok = matches!(
                (g_poly_exact(k, &h), g_poly_exact(k, &mirror)),
                (Ok(x), Ok(y)) if x == if k % 2 == 0 { y.clone() } else { Rational::from(-&y) }
            );
            t.record_bool(ok, || format!("g_{k} symmetry at h = {h}"));
            let hf = h.to_f64();
            if let (Ok(x), Ok(y)) = (g_poly(k, hf), g_poly(k, 1.5 - hf)) {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                t.record((x - sign * y).abs(), 1e-15, || format!("g_{k} float symmetry at h = {hf}"));
            }
        }
    }
    t.finish()
}

/// Every published grid cell reproduced within 1%.
pub fn table1_reproduction(digits: u32) -> Check {
    let mut t = Tally::new("table1_reproduction");
    match table1::compute(digits) {
        Ok(cells) => {
            for cell in cells {
                let col = &table1::COLUMNS[cell.column];
                t.record(cell.rel_dev(), table1::CELL_TOL, || {
                    format!("{} k={}: {:.4e} vs {:.4e}", col.label, cell.k, cell.computed, cell.printed)
                });
            }
        }
        Err(e) => t.record_err(e, || "table".into()),
    }
    t.finish()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

fn slope_check(t: &mut Tally, label: &str, ns: &[u64], errs: Result<Vec<f64>>, want: f64, within: f64) {
    match errs {
        Ok(errs) => {
            let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
            let slope = loglog_slope(&xs, &errs);
            t.record((slope - want).abs(), within, || format!("{label}: slope {slope:.3}, want {want}"));
        }
        Err(e) => t.record_err(e, || label.to_string()),
    }
}

/// Error decay orders of the truncated asymptotic expansions.
pub fn asymptotic_orders(digits: u32) -> Check {
    let mut t = Tally::new("asymptotic_orders");
    let (a, b) = (ComplexVal::new(1.0 / 3.0, 0.0), ComplexVal::new(2.0 / 3.0, 0.0));
    let log_ns = [40u64, 80, 160];
    for k in 1..=3 {
        let errs = log_ns
            .iter()
            .map(|&n| {
                let r = oracle_eval(OracleRequest::PartialSum { a, b, c: a + b, n }, digits)?;
                Ok(compare(asym_log(a, b, n, k)?, &r).abs_err)
            })
            .collect();
        slope_check(&mut t, &format!("asym_log K={k}"), &log_ns, errs, -(k as f64 + 1.0), 0.2);
    }
    let landau_err = |ns: &[u64], f: &dyn Fn(u64) -> Result<f64>| -> Result<Vec<f64>> {
        ns.iter()
            .map(|&n| {
                let r = oracle_eval(OracleRequest::Landau(n), digits)?;
                Ok(compare(ComplexVal::new(f(n)?, 0.0), &r).abs_err)
            })
            .collect()
    };
    // The K = 6 truncation error drops below f64 resolution of G_n by
    // n = 50, so the expansion is evaluated at oracle precision for the fit
    // and the f64 routine is checked against that evaluation.
    let ns = [50u64, 100, 200];
    let errs = ns
        .iter()
        .map(|&n| {
            let exact = oracle_eval(OracleRequest::Landau(n), digits)?;
            let expansion = landau_expansion_ref(n, 6, digits)?;
            let f64_dev = compare(ComplexVal::new(landau_asymptotic(n, 6)?, 0.0), &expansion).rel_err;
            t.record(f64_dev, 4.0 * f64::EPSILON, || format!("landau_asymptotic n={n}: f64 value off the expansion"));
            Ok((&exact.value - &expansion.value).abs().to_f64())
        })
        .collect();
    slope_check(&mut t, "landau_asymptotic K=6", &ns, errs, -7.0, 0.3);
    let ns = [50u64, 100, 200];
    slope_check(&mut t, "landau_nemes K=3", &ns, landau_err(&ns, &|n| landau_nemes(n, 1.0, 3)), -4.0, 0.3);
    t.finish()
}

/// `ψ(N+1)/π + c_0 + (1/π) Σ_{k<=K} (-1)^k C_k / N^k`, `N = n + 1`, at
/// oracle precision.
fn landau_expansion_ref(n: u64, k_max: usize, digits: u32) -> Result<OracleValue> {
    let big_n = (n + 1) as f64;
    let psi = oracle_eval(OracleRequest::Digamma(ComplexVal::new(big_n + 1.0, 0.0)), digits)?;
    let prec = psi.value.prec();
    let pi = Float::with_val(prec, Constant::Pi);
    let c0 = (Float::with_val(prec, Constant::Euler) + Float::with_val(prec, Constant::Log2) * 4u32) / &pi;
    let mut corr = Float::new(prec);
    if let CoeffValues::Exact(cs) = c_coeffs().values {
        let inv = Float::with_val(prec, -1.0 / big_n);
        let mut pw = Float::with_val(prec, 1);
        for ck in cs.iter().take(k_max) {
            pw *= &inv;
            corr += Float::with_val(prec, ck) * &pw;
        }
    }
    let value = (psi.value.re.clone() + corr) / &pi + c0;
    Ok(OracleValue { value: Hp::from_real(value), digits, request: OracleRequest::Landau(n) })
}

/// The finite-expansion bound holds and decays like `N^{-M}`.
pub fn remainder_scaling(cases: &[(u64, u64)], digits: u32) -> Check {
    let mut t = Tally::new("remainder_scaling");
    for &(big_n, m) in cases {
        let what = || format!("N={big_n} M={m}");
        let res = (|| -> Result<(f64, f64, f64, f64)> {
            let (v, bound) = landau_theorem3(big_n - 1, m)?;
            let r = oracle_eval(OracleRequest::Landau(big_n - 1), digits)?;
            let err = compare(ComplexVal::new(v, 0.0), &r).abs_err;
            let doubled = remainder_bound(2 * big_n, m)?;
            Ok((err, bound, v, (doubled / bound).log2()))
        })();
        match res {
            Ok((err, bound, v, slope)) => {
                t.record(err / (bound + 4.0 * f64::EPSILON * v), 1.0, || format!("{} error above bound", what()));
                t.record((slope + m as f64).abs(), 0.3, || format!("{}: slope {slope:.3}", what()));
            }
            Err(e) => t.record_err(e, what),
        }
    }
    t.finish()
}

/// Every check with its default size.
pub fn run_all(opts: &VerifyOptions) -> Vec<Check> {
    let s = opts.seed;
    let n = opts.cases;
    let d = opts.digits;
    vec![
        kernel_recurrence(s, 20 * n),
        kernel_conjugate(s.wrapping_add(1), 20 * n),
        kernel_oracle(s.wrapping_add(2), 2 * n, d.max(50)),
        digamma_at_one(),
        pochhammer_split(s.wrapping_add(3), n),
        n1_identity(s.wrapping_add(4), n),
        oracle_equivalence(s.wrapping_add(5), n, &[5, 20, 100], d, 1e-10),
        incremental_consistency(s.wrapping_add(6), n),
        gauss_limit(s.wrapping_add(7), n.div_ceil(5), d),
        branch_continuity(s.wrapping_add(8), n.div_ceil(5)),
        conjecture(s.wrapping_add(9), n.div_ceil(10), &[3, 10, 50], d, 1e-10),
        landau_agreement(&[1, 5, 10, 50, 100], 10, 1e-11),
        landau_bound(),
        landau_growth(),
        coefficient_golden(s),
        table1_reproduction(d.max(table1::TABLE_DIGITS)),
        asymptotic_orders(d.max(40)),
        remainder_scaling(&[(51, 5), (101, 8), (201, 10)], d.max(40)),
    ]
}
