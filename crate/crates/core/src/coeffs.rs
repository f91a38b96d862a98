//! Coefficient families of the expansions and the asymptotic evaluators
//! built from them.
//!
//! Printed constants are stored as exact rationals and converted at use.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Sub};

use rug::Rational;

use crate::complexfn::{digamma, gamma_ratio, near_nonpositive_integer, pochhammer, ComplexVal, POLE_TOL};
use crate::dd::DdComplex;
use crate::engine::{neg_int_finite, omega_prefactor, wrong_branch, Exact};
use crate::error::{Error, Result};
use crate::params::{seq_factors, ExcessKind, ParamSet};

/// Which family a [`CoefficientTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    /// `σ_k(a,b)`
    Sigma,
    /// `A_k(a,b)` of the logarithmic asymptotic expansion
    A,
    /// `C_k` of the Landau asymptotic expansion
    C,
    /// Nemes polynomials `g_k(h)`
    G,
    /// Coefficients of `λ_n` in inverse powers of `n`
    LambdaSeries,
}

impl CoeffKind {
    pub fn name(self) -> &'static str {
        match self {
            CoeffKind::Sigma => "sigma",
            CoeffKind::A => "A",
            CoeffKind::C => "C",
            CoeffKind::G => "g",
            CoeffKind::LambdaSeries => "lambda",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffParams {
    AB(ComplexVal, ComplexVal),
    H(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffValues {
    Exact(Vec<Rational>),
    Complex(Vec<ComplexVal>),
}

/// A coefficient sequence indexed from `k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub kind: CoeffKind,
    pub params: Option<CoeffParams>,
    pub values: CoeffValues,
}

impl CoefficientTable {
    pub fn len(&self) -> usize {
        match &self.values {
            CoeffValues::Exact(v) => v.len(),
            CoeffValues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entry `k` (1-based) as a complex number.
    pub fn get(&self, k: usize) -> Option<ComplexVal> {
        let i = k.checked_sub(1)?;
        match &self.values {
            CoeffValues::Exact(v) => v.get(i).map(|r| ComplexVal::new(r.to_f64(), 0.0)),
            CoeffValues::Complex(v) => v.get(i).copied(),
        }
    }

    pub fn to_complex(&self) -> Vec<ComplexVal> {
        (1..=self.len()).filter_map(|k| self.get(k)).collect()
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        match &self.values {
            CoeffValues::Exact(v) => Some(v),
            CoeffValues::Complex(_) => None,
        }
    }
}

fn q(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

fn c1(x: f64) -> ComplexVal {
    ComplexVal::new(x, 0.0)
}

/// `σ_k(a,b) = Σ_{r<k} (1/(a+r) + 1/(b+r) - 1/(r+1))` for `k = 1..=K`.
pub fn sigma_coeffs(a: ComplexVal, b: ComplexVal, k_max: usize) -> Result<CoefficientTable> {
    let mut acc = c1(0.0);
    let mut values = Vec::with_capacity(k_max);
    for r in 0..k_max {
        let rf = r as f64;
        for z in [a + rf, b + rf] {
            if near_nonpositive_integer(z, POLE_TOL).is_some() {
                return Err(Error::Pole { z });
            }
        }
        acc += (a + rf).inv() + (b + rf).inv() - 1.0 / (rf + 1.0);
        values.push(acc);
    }
    Ok(CoefficientTable {
        kind: CoeffKind::Sigma,
        params: Some(CoeffParams::AB(a, b)),
        values: CoeffValues::Complex(values),
    })
}

/// `σ_k(a,b)` in exact arithmetic for rational `a`, `b`.
pub fn sigma_coeffs_exact(a: &Rational, b: &Rational, k_max: usize) -> Result<Vec<Rational>> {
    let mut acc = Rational::new();
    let mut out = Vec::with_capacity(k_max);
    for r in 0..k_max {
        let ar = Rational::from(a + r as u32);
        let br = Rational::from(b + r as u32);
        if ar == 0 || br == 0 {
            let z = if ar == 0 { ar.to_f64() } else { br.to_f64() };
            return Err(Error::Pole { z: c1(z) });
        }
        acc += ar.recip() + br.recip() - q(1, r as i64 + 1);
        out.push(acc.clone());
    }
    Ok(out)
}

/// `σ_k(1/2,1/2)` from `σ_1 = 3`, `σ_k = σ_{k-1} + (2k+1)/((2k-1)k)`.
pub fn sigma_half_recurrence(k_max: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(k_max);
    let mut s = q(3, 1);
    for k in 1..=k_max as i64 {
        if k > 1 {
            s += q(2 * k + 1, (2 * k - 1) * k);
        }
        out.push(s.clone());
    }
    out
}

/// `c_0(a,b) = Γ(a+b)/(Γ(a)Γ(b)) (ψ(1) - ψ(a) - ψ(b))`
pub fn c0(a: ComplexVal, b: ComplexVal) -> Result<ComplexVal> {
    let pref = gamma_ratio(&[a + b], &[a, b])?;
    Ok(pref * (digamma(c1(1.0))? - digamma(a)? - digamma(b)?))
}

fn a_formula<T>(a: T, b: T, lift: impl Fn(i64, i64) -> T) -> [T; 3]
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Div<Output = T>,
{
    let one = lift(1, 1);
    let ab = a.clone() * b.clone();
    let am1b1 = (a.clone() - one.clone()) * (b.clone() - one.clone());
    let a1 = ab.clone() - a.clone() - b.clone();
    let a2 = (am1b1.clone()
        * (lift(2, 1) * a.clone() + lift(2, 1) * b.clone() + ab.clone())
        - lift(4, 1) * ab.clone())
        / lift(4, 1);
    let inner = lift(6, 1)
        * (lift(2, 1) * a.clone() * a.clone() + lift(2, 1) * b.clone() * b.clone() - a.clone() - b.clone())
        + ab.clone()
            * (lift(8, 1) * a.clone() + lift(8, 1) * b.clone() + lift(2, 1) * ab.clone() + lift(5, 1));
    let a3 = (am1b1 * inner - lift(36, 1) * ab * (a + b - one)) / lift(36, 1);
    [a1, a2, a3]
}

/// `A_1, A_2, A_3` of the logarithmic asymptotic expansion.
pub fn a_coeffs(a: ComplexVal, b: ComplexVal) -> CoefficientTable {
    let v = a_formula(a, b, |p, d| c1(p as f64 / d as f64));
    CoefficientTable {
        kind: CoeffKind::A,
        params: Some(CoeffParams::AB(a, b)),
        values: CoeffValues::Complex(v.to_vec()),
    }
}

/// `A_1, A_2, A_3` in exact arithmetic for rational `a`, `b`.
pub fn a_coeffs_exact(a: &Rational, b: &Rational) -> Vec<Rational> {
    a_formula(a.clone(), b.clone(), q).to_vec()
}

/// `C_1 … C_6` of the Landau asymptotic expansion.
pub fn c_coeffs() -> CoefficientTable {
    let v = [(3, 4), (7, 64), (-3, 128), (-91, 8192), (75, 8192), (641, 131072)];
    CoefficientTable {
        kind: CoeffKind::C,
        params: None,
        values: CoeffValues::Exact(v.iter().map(|&(p, d)| q(p, d)).collect()),
    }
}

/// Coefficients of `g_k(h)` in ascending powers of `h`.
fn g_coeffs(k: usize) -> Result<Vec<Rational>> {
    Ok(match k {
        1 => vec![q(-3, 4), q(1, 1)],
        2 => vec![q(43, 192), q(-144, 192), q(96, 192)],
        3 => vec![q(-21, 384), q(172, 384), q(-288, 384), q(128, 384)],
        _ => return Err(Error::Domain(format!("g_k is available for k in 1..=3, got {k}"))),
    })
}

/// Nemes polynomial `g_k(h)`, `k` in `1..=3`, in exact arithmetic.
pub fn g_poly_exact(k: usize, h: &Rational) -> Result<Rational> {
    let mut acc = Rational::new();
    for c in g_coeffs(k)?.iter().rev() {
        acc = acc * h + c;
    }
    Ok(acc)
}

/// Nemes polynomial `g_k(h)`, `k` in `1..=3`.
pub fn g_poly(k: usize, h: f64) -> Result<f64> {
    Ok(g_coeffs(k)?.iter().rev().fold(0.0, |acc, c| acc * h + c.to_f64()))
}

/// Table of `g_1(h) … g_3(h)`.
pub fn g_table(h: f64) -> Result<CoefficientTable> {
    let values = (1..=3).map(|k| g_poly(k, h).map(c1)).collect::<Result<_>>()?;
    Ok(CoefficientTable { kind: CoeffKind::G, params: Some(CoeffParams::H(h)), values: CoeffValues::Complex(values) })
}

/// Coefficients of `n^{-k}` in `λ_n` for `a = b = 1/2`, `k = 1..=5`.
pub fn lambda_coeffs_half() -> CoefficientTable {
    let v = [(-1, 4), (1, 32), (1, 128), (-5, 2048), (-23, 8192)];
    CoefficientTable {
        kind: CoeffKind::LambdaSeries,
        params: Some(CoeffParams::AB(c1(0.5), c1(0.5))),
        values: CoeffValues::Exact(v.iter().map(|&(p, d)| q(p, d)).collect()),
    }
}

/// Coefficients of `n^{-1}`, `n^{-2}` in `λ_n` for general `a`, `b`.
pub fn lambda_coeffs(a: ComplexVal, b: ComplexVal) -> CoefficientTable {
    if a == c1(0.5) && b == c1(0.5) {
        return lambda_coeffs_half();
    }
    let ab = a * b;
    CoefficientTable {
        kind: CoeffKind::LambdaSeries,
        params: Some(CoeffParams::AB(a, b)),
        values: CoeffValues::Complex(vec![-ab, ab * (a + b - 1.0 + ab) / 2.0]),
    }
}

/// Truncated inverse-power expansion of `λ_n` through `n^{-order}`.
pub fn lambda_series(a: ComplexVal, b: ComplexVal, n: u64, order: usize) -> Result<ComplexVal> {
    let table = lambda_coeffs(a, b);
    if order > table.len() {
        return Err(Error::Domain(format!(
            "λ_n expansion is available through order {} for these parameters, got {order}",
            table.len()
        )));
    }
    let inv = 1.0 / n as f64;
    let mut acc = c1(1.0);
    let mut pw = 1.0;
    for k in 1..=order {
        pw *= inv;
        acc += table.get(k).expect("order checked") * pw;
    }
    Ok(acc)
}

/// Bound on the remainder after `M-1` terms of the Landau correction
/// series, `(4/π²) Γ²(M+1/2) Γ(n-M)/Γ(n)`.
pub fn remainder_bound(n: u64, m: u64) -> Result<f64> {
    if n <= m {
        return Err(Error::Domain(format!("remainder bound needs n > M, got n = {n}, M = {m}")));
    }
    let h = c1(m as f64 + 0.5);
    let r = gamma_ratio(&[c1((n - m) as f64), h, h], &[c1(n as f64)])?;
    Ok(4.0 / (PI * PI) * r.re)
}

fn check_order(k: usize) -> Result<()> {
    if k > 3 {
        return Err(Error::Domain(format!("A_k is available for k <= 3, got K = {k}")));
    }
    Ok(())
}

/// `ψ(n+a+b) + (ψ(1)-ψ(a)-ψ(b)) + Σ_{k=1}^{K} (-1)^{k-1} A_k / n^k`
fn log_bracket(a: ComplexVal, b: ComplexVal, n: u64, k_max: usize) -> Result<ComplexVal> {
    let nf = n as f64;
    let mut v = digamma(a + b + nf)? + digamma(c1(1.0))? - digamma(a)? - digamma(b)?;
    let table = a_coeffs(a, b);
    let mut pw = 1.0;
    for k in 1..=k_max {
        pw /= nf;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        v += sign * table.get(k).expect("three coefficients") * pw;
    }
    Ok(v)
}

/// Asymptotic expansion of `S_n(a,b;a+b)` truncated after `K <= 3`
/// correction terms.
pub fn asym_log(a: ComplexVal, b: ComplexVal, n: u64, k_max: usize) -> Result<ComplexVal> {
    check_order(k_max)?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let pref = gamma_ratio(&[a + b], &[a, b])?;
    Ok(pref * log_bracket(a, b, n, k_max)?)
}

/// Asymptotic expansion of `S_n(a,b;c)` for `s = -m`, truncated after
/// `K <= 3` correction terms. The finite sum is kept exact.
pub fn asym_neg_int(p: &ParamSet, n: u64, k_max: usize) -> Result<ComplexVal> {
    check_order(k_max)?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let class = p.classify();
    let m = match class.kind {
        ExcessKind::NegativeInteger { m } => m,
        _ => return Err(wrong_branch("negative_integer", &class)),
    };
    let (a, b, c) = (p.a(), p.b(), p.c());
    let x = Exact::of(p);
    let (fin, _) = neg_int_finite(x.ca, x.cb, DdComplex::shifted(x.c, n as f64), m, m);
    let first = omega_prefactor(p, n)? / m as f64 * fin;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let pref = sign * gamma_ratio(&[c], &[c - a, c - b, c1(m as f64 + 1.0)])?;
    Ok(first + pref * log_bracket(a, b, n, k_max)?)
}

/// Single-sum form of the double sum
/// `Σ_{k>=1} (a)_k(b)_k/((n+a+b)_k k!) Σ_{r<k} 1/(n+a+b+r)`, through
/// `K-1` terms with `K = ⌊(M+1)/2⌋`. The result approximates `λ_n` times
/// the double sum.
pub fn rearranged_tail(a: ComplexVal, b: ComplexVal, n: u64, m: u64) -> Result<ComplexVal> {
    let k = m.div_ceil(2);
    if n <= k {
        return Err(Error::Domain(format!("rearranged tail needs n > K = {k}, got n = {n}")));
    }
    let nf = n as f64;
    let f = a + b + nf;
    let mut acc = c1(0.0);
    let mut falling = 1.0;
    for r in 1..k {
        falling *= nf - r as f64;
        let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * pochhammer(a, r) * pochhammer(b, r) / (r as f64 * pochhammer(f, r) * falling);
    }
    Ok(acc)
}

/// `λ_n` times the double sum that [`rearranged_tail`] rearranges,
/// summed directly.
pub fn double_sum_tail(a: ComplexVal, b: ComplexVal, n: u64, k_max: u64) -> Result<ComplexVal> {
    let p = ParamSet::new(a, b, a + b)?;
    let lam = seq_factors(&p, n)?.lambda_n;
    let f = a + b + n as f64;
    let mut t = c1(1.0);
    let mut inner = c1(0.0);
    let mut terms = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let j = (k - 1) as f64;
        t = t * (a + j) * (b + j) / ((f + j) * (j + 1.0));
        inner += (f + j).inv();
        terms.push(t * inner);
    }
    Ok(lam * crate::series::neumaier_sum(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        let half = q(1, 2);
        let s = sigma_coeffs_exact(&half, &half, 6).unwrap();
        let want = [q(3, 1), q(23, 6), q(43, 10), q(647, 140), q(6131, 1260), q(70171, 13860)];
        assert_eq!(s, want);
        assert_eq!(sigma_half_recurrence(10), sigma_coeffs_exact(&half, &half, 10).unwrap());
        let a = ComplexVal::new(0.3, 0.2);
        let b = c1(1.7);
        let t = sigma_coeffs(a, b, 1).unwrap();
        assert!((t.get(1).unwrap() - (a.inv() + b.inv() - 1.0)).norm() < 1e-15);
        assert!(matches!(sigma_coeffs(c1(-2.0), b, 4), Err(Error::Pole { .. })));
    }

    #[test]
    fn c0_examples() {
        let v = c0(c1(0.5), c1(0.5)).unwrap();
        let closed = (crate::complexfn::EULER_GAMMA + 4.0 * 2f64.ln()) / PI;
        assert!((v.re - closed).abs() < 1e-14);
        assert!((v.re - 1.06627585320891435435).abs() < 1e-14);
        assert!((c0(c1(1.0), c1(1.0)).unwrap().re - crate::complexfn::EULER_GAMMA).abs() < 1e-14);
    }

    #[test]
    fn a_and_c_reduction() {
        let half = q(1, 2);
        let a = a_coeffs_exact(&half, &half);
        let c = c_coeffs();
        for (ak, ck) in a.iter().zip(c.exact().unwrap()) {
            assert_eq!(*ak, -ck.clone());
        }
        assert_eq!(a_coeffs_exact(&q(1, 1), &q(1, 1))[0], q(-1, 1));
        let z = a_coeffs(c1(0.5), c1(0.5));
        assert!((z.get(2).unwrap().re + 7.0 / 64.0).abs() < 1e-16);
    }

    #[test]
    fn c_golden_values() {
        let c = c_coeffs();
        assert_eq!(c.exact().unwrap()[2], q(-3, 128));
        assert_eq!(c.exact().unwrap()[5], q(641, 131072));
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_poly_exact(2, &q(0, 1)).unwrap(), q(43, 192));
        assert_eq!(g_poly_exact(1, &q(3, 4)).unwrap(), q(0, 1));
        let h = q(3, 10);
        let mirror = q(3, 2) - h.clone();
        assert_eq!(g_poly_exact(3, &h).unwrap() + g_poly_exact(3, &mirror).unwrap(), q(0, 1));
        assert!(g_poly(4, 0.5).is_err());
    }

    #[test]
    fn lambda_series_examples() {
        let half = c1(0.5);
        let lam = seq_factors(&ParamSet::real(0.5, 0.5, 1.0).unwrap(), 100).unwrap().lambda_n;
        assert!((lambda_series(half, half, 100, 5).unwrap() - lam).norm() < 1e-12);
        assert_eq!(lambda_series(half, half, 100, 0).unwrap(), c1(1.0));
        let (a, b) = (c1(1.0 / 3.0), c1(2.0 / 3.0));
        let lam = seq_factors(&ParamSet::new(a, b, c1(1.0)).unwrap(), 100).unwrap().lambda_n;
        assert!((lambda_series(a, b, 100, 2).unwrap() - lam).norm() < 1e-6);
        assert!(lambda_series(a, b, 100, 3).is_err());
        assert!(lambda_series(half, half, 100, 6).is_err());
    }

    #[test]
    fn remainder_bound_scaling() {
        for (n, m) in [(51u64, 5u64), (101, 8), (201, 10)] {
            let ratio = remainder_bound(2 * n, m).unwrap() / remainder_bound(n, m).unwrap();
            let slope = ratio.log2();
            assert!((slope + m as f64).abs() < 0.3 * m as f64, "{n} {m} {slope}");
        }
        assert!(remainder_bound(101, 3).unwrap() > 0.0);
        assert!(remainder_bound(5, 5).is_err());
    }

    #[test]
    fn asym_log_table_cell() {
        // S_40(1/3, 2/3; 1) from a 30-digit reference
        let s40 = 2.08264422370942795348883365485;
        let v = asym_log(c1(1.0 / 3.0), c1(2.0 / 3.0), 40, 1).unwrap();
        assert!(((v.re - s40).abs() / 1.711e-5 - 1.0).abs() < 0.01);
        let v = asym_log(c1(1.0 / 3.0), c1(2.0 / 3.0), 40, 3).unwrap();
        assert!(((v.re - s40).abs() / 9.845e-10 - 1.0).abs() < 0.01);
    }

    #[test]
    fn asym_neg_int_table_cell() {
        let p = ParamSet::real(1.5, -0.25, 0.25).unwrap();
        let s50 = -42.4461701229286632978318302582;
        let v = asym_neg_int(&p, 50, 3).unwrap();
        assert!(((v.re - s50).abs() / 4.141e-11 - 1.0).abs() < 0.01);
        let d = ParamSet::real(1.0, 0.5, -0.5).unwrap();
        assert!(matches!(asym_neg_int(&d, 50, 1), Err(Error::WrongBranch { .. })));
    }

    #[test]
    fn rearranged_tail_examples() {
        let half = c1(0.5);
        // r = 1 term: (1/4)/(n^2 - 1)
        let one = rearranged_tail(half, half, 51, 3).unwrap();
        assert!((one.re - 0.25 / (51.0 * 51.0 - 1.0)).abs() < 1e-18);
        let direct = double_sum_tail(half, half, 51, 200).unwrap();
        let rearr = rearranged_tail(half, half, 51, 5).unwrap();
        assert!((direct - rearr).norm() < 51f64.powi(-5));
        let (a, b) = (c1(1.0 / 3.0), c1(2.0 / 3.0));
        let direct = double_sum_tail(a, b, 40, 200).unwrap();
        assert!((direct - rearranged_tail(a, b, 40, 5).unwrap()).norm() < 1e-9);
        assert!(rearranged_tail(half, half, 3, 5).is_err());
    }
}
