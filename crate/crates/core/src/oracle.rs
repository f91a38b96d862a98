//! Extended-precision reference values on MPFR.
//!
//! Partial sums are accumulated term by term; the gamma and digamma
//! functions use Spouge's approximation and its logarithmic derivative, an
//! algorithm family unrelated to the Stirling-series kernel in
//! [`crate::complexfn`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{LN_10, LN_2, PI};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

use rug::float::Constant;
use rug::Float;

use crate::complexfn::{near_nonpositive_integer, ComplexVal, POLE_TOL};
use crate::error::{Error, Result};
use crate::params::ParamSet;

pub const MIN_DIGITS: u32 = 30;
pub const MAX_DIGITS: u32 = 4000;
pub const DEFAULT_DIGITS: u32 = 40;
pub const DIGITS_ENV: &str = "HYPERSUM_ORACLE_DIGITS";

const MAX_SUM_TERMS: u64 = 100_000;
const GUARD_BITS: u32 = 32;

/// Oracle precision from `HYPERSUM_ORACLE_DIGITS`, or the default.
pub fn default_digits() -> Result<u32> {
    match std::env::var(DIGITS_ENV) {
        Ok(v) => {
            let d: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{DIGITS_ENV}={v:?} is not an integer")))?;
            check_digits(d)
        }
        Err(_) => Ok(DEFAULT_DIGITS),
    }
}

fn check_digits(digits: u32) -> Result<u32> {
    if (MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
        Ok(digits)
    } else {
        Err(Error::PrecisionUnavailable(digits))
    }
}

fn bits_for(digits: u32) -> u32 {
    (digits as f64 * LN_10 / LN_2).ceil() as u32 + GUARD_BITS
}

/// Complex number with MPFR components of equal precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Hp {
    pub re: Float,
    pub im: Float,
}

impl Hp {
    pub fn from_complex(prec: u32, z: ComplexVal) -> Self {
        Hp { re: Float::with_val(prec, z.re), im: Float::with_val(prec, z.im) }
    }

    pub fn from_real(x: Float) -> Self {
        let im = Float::new(x.prec());
        Hp { re: x, im }
    }

    pub fn zero(prec: u32) -> Self {
        Hp { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Hp { re: Float::with_val(prec, 1), im: Float::new(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn to_complex(&self) -> ComplexVal {
        ComplexVal::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn add_real(&self, x: f64) -> Hp {
        Hp { re: Float::with_val(self.prec(), &self.re + x), im: self.im.clone() }
    }

    pub fn scale(&self, x: &Float) -> Hp {
        let p = self.prec();
        Hp { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn recip(&self) -> Hp {
        &Hp::one(self.prec()) / self
    }

    pub fn ln(&self) -> Hp {
        let p = self.prec();
        Hp { re: self.abs().ln(), im: Float::with_val(p, self.im.atan2_ref(&self.re)) }
    }

    pub fn exp(&self) -> Hp {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        Hp { re: Float::with_val(p, &m * &c), im: m * s }
    }

    /// `sin z` and `cos z`.
    pub fn sin_cos(&self) -> (Hp, Hp) {
        let p = self.prec();
        let (s, c) = Float::with_val(p, &self.re).sin_cos(Float::new(p));
        let (sh, ch) = Float::with_val(p, &self.im).sinh_cosh(Float::new(p));
        let sin = Hp { re: Float::with_val(p, &s * &ch), im: Float::with_val(p, &c * &sh) };
        let cos = Hp { re: Float::with_val(p, &c * &ch), im: -(s * sh) };
        (sin, cos)
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        let d = Some(digits as usize);
        (self.re.to_string_radix(10, d), self.im.to_string_radix(10, d))
    }
}

impl Add for &Hp {
    type Output = Hp;
    fn add(self, o: &Hp) -> Hp {
        let p = self.prec();
        Hp { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub for &Hp {
    type Output = Hp;
    fn sub(self, o: &Hp) -> Hp {
        let p = self.prec();
        Hp { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul for &Hp {
    type Output = Hp;
    fn mul(self, o: &Hp) -> Hp {
        let p = self.prec();
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        Hp { re: rr - ii, im: ri + ir }
    }
}

impl Div for &Hp {
    type Output = Hp;
    fn div(self, o: &Hp) -> Hp {
        let p = self.prec();
        let den = Float::with_val(p, o.re.square_ref()) + Float::with_val(p, o.im.square_ref());
        let conj = Hp { re: o.re.clone(), im: Float::with_val(p, -&o.im) };
        let num = self * &conj;
        Hp { re: num.re / &den, im: num.im / &den }
    }
}

impl Add for Hp {
    type Output = Hp;
    fn add(self, o: Hp) -> Hp {
        &self + &o
    }
}

impl Sub for Hp {
    type Output = Hp;
    fn sub(self, o: Hp) -> Hp {
        &self - &o
    }
}

impl Mul for Hp {
    type Output = Hp;
    fn mul(self, o: Hp) -> Hp {
        &self * &o
    }
}

impl Div for Hp {
    type Output = Hp;
    fn div(self, o: Hp) -> Hp {
        &self / &o
    }
}

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp { re: -self.re, im: -self.im }
    }
}

/// What the oracle should compute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleRequest {
    PartialSum { a: ComplexVal, b: ComplexVal, c: ComplexVal, n: u64 },
    Gamma(ComplexVal),
    Digamma(ComplexVal),
    /// `G_n`
    Landau(u64),
}

/// Reference value with the decimal precision it was computed at.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleValue {
    pub value: Hp,
    pub digits: u32,
    pub request: OracleRequest,
}

impl OracleValue {
    pub fn to_complex(&self) -> ComplexVal {
        self.value.to_complex()
    }

    pub fn to_decimal(&self) -> (String, String) {
        self.value.to_decimal(self.digits)
    }
}

/// Absolute and relative deviation from a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub abs_err: f64,
    pub rel_err: f64,
    pub reference_precision: u32,
}

/// Evaluate `request` with at least `digits` significant decimal digits.
pub fn oracle_eval(request: OracleRequest, digits: u32) -> Result<OracleValue> {
    let digits = check_digits(digits)?;
    let prec = bits_for(digits);
    let value = match request {
        OracleRequest::PartialSum { a, b, c, n } => {
            ParamSet::new(a, b, c)?;
            if n > MAX_SUM_TERMS {
                return Err(Error::InvalidParameter(format!(
                    "oracle partial sums are limited to n <= {MAX_SUM_TERMS}"
                )));
            }
            partial_sum(prec, a, b, c, n)
        }
        OracleRequest::Gamma(z) => {
            check_argument(z)?;
            hp_gamma(&Hp::from_complex(prec, z), digits)
        }
        OracleRequest::Digamma(z) => {
            check_argument(z)?;
            hp_digamma(&Hp::from_complex(prec, z), digits)
        }
        OracleRequest::Landau(n) => {
            if n > MAX_SUM_TERMS {
                return Err(Error::InvalidParameter(format!(
                    "oracle Landau constants are limited to n <= {MAX_SUM_TERMS}"
                )));
            }
            Hp::from_real(landau(prec, n))
        }
    };
    Ok(OracleValue { value, digits, request })
}

/// Partial sum `S_n(a,b;c)` of a validated parameter set.
pub fn partial_sum_ref(p: &ParamSet, n: u64, digits: u32) -> Result<OracleValue> {
    oracle_eval(OracleRequest::PartialSum { a: p.a(), b: p.b(), c: p.c(), n }, digits)
}

/// Deviation of `x` from `reference`, evaluated at the reference precision.
pub fn compare(x: ComplexVal, reference: &OracleValue) -> ErrorReport {
    let r = &reference.value;
    let diff = &Hp::from_complex(r.prec(), x) - r;
    let abs = diff.abs().to_f64();
    let mag = r.abs().to_f64();
    let rel = if mag > 0.0 {
        abs / mag
    } else if abs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    ErrorReport { abs_err: abs, rel_err: rel, reference_precision: reference.digits }
}

fn check_argument(z: ComplexVal) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("argument {z} is not finite")));
    }
    if near_nonpositive_integer(z, POLE_TOL).is_some() {
        return Err(Error::InvalidParameter(format!("argument {z} is a pole")));
    }
    Ok(())
}

fn partial_sum(prec: u32, a: ComplexVal, b: ComplexVal, c: ComplexVal, n: u64) -> Hp {
    // a little headroom for cancellation between terms of mixed sign
    let prec = prec + 64;
    let (a, b, c) = (Hp::from_complex(prec, a), Hp::from_complex(prec, b), Hp::from_complex(prec, c));
    let mut sum = Hp::zero(prec);
    let mut t = Hp::one(prec);
    for k in 0..n {
        sum = &sum + &t;
        let kf = k as f64;
        let num = &a.add_real(kf) * &b.add_real(kf);
        let den = c.add_real(kf).scale(&Float::with_val(prec, kf + 1.0));
        t = &(&t * &num) / &den;
    }
    sum
}

fn landau(prec: u32, n: u64) -> Float {
    let mut sum = Float::new(prec);
    let mut t = Float::with_val(prec, 1);
    for k in 0..=n {
        sum += &t;
        let r = Float::with_val(prec, 2 * k + 1) / Float::with_val(prec, 2 * k + 2);
        t *= Float::with_val(prec, r.square_ref());
    }
    sum
}

/// Spouge parameter and working precision for `digits` decimal digits.
fn spouge_setup(digits: u32) -> (u32, u32) {
    let a = ((digits as f64 + 5.0) * LN_10 / (2.0 * PI).ln()).ceil() as u32 + 1;
    let wp = bits_for(digits) + 3 * a + GUARD_BITS;
    (a, wp)
}

type CoeffCache = HashMap<(u32, u32), Rc<Vec<Float>>>;

thread_local! {
    static SPOUGE: RefCell<CoeffCache> = RefCell::new(HashMap::new());
}

/// `c_0 = √(2π)`, `c_k = (-1)^{k-1} (a-k)^{k-1/2} e^{a-k} / (k-1)!`.
fn spouge_coeffs(a: u32, wp: u32) -> Rc<Vec<Float>> {
    SPOUGE.with(|cache| {
        cache
            .borrow_mut()
            .entry((a, wp))
            .or_insert_with(|| {
                let mut out = Vec::with_capacity(a as usize);
                let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
                out.push(two_pi.sqrt());
                let mut fact = Float::with_val(wp, 1);
                for k in 1..a {
                    if k > 1 {
                        fact *= k - 1;
                    }
                    let base = Float::with_val(wp, a - k);
                    let pow = Float::with_val(wp, rug::ops::Pow::pow(&base, Float::with_val(wp, k as f64 - 0.5)));
                    let e = Float::with_val(wp, a - k).exp();
                    let mut ck = pow * e / &fact;
                    if k % 2 == 0 {
                        ck = -ck;
                    }
                    out.push(ck);
                }
                Rc::new(out)
            })
            .clone()
    })
}

/// `(Σ_k c_k/(z+k), -Σ_k c_k/(z+k)²)` with `c_0` counted in the first sum.
fn spouge_sums(z: &Hp, coeffs: &[Float]) -> (Hp, Hp) {
    let p = z.prec();
    let mut s = Hp::from_real(Float::with_val(p, &coeffs[0]));
    let mut ds = Hp::zero(p);
    for (k, ck) in coeffs.iter().enumerate().skip(1) {
        let inv = z.add_real(k as f64).recip();
        let term = inv.scale(ck);
        ds = &ds - &(&term * &inv);
        s = &s + &term;
    }
    (s, ds)
}

/// `Γ(w)` by Spouge's formula for `Γ(z+1)` with `z = w - 1`.
fn hp_gamma(w: &Hp, digits: u32) -> Hp {
    let out_prec = w.prec();
    let (a, wp) = spouge_setup(digits);
    let w = Hp { re: Float::with_val(wp, &w.re), im: Float::with_val(wp, &w.im) };
    let half = Float::with_val(wp, 0.5);
    let g = if w.re < half {
        // Γ(w) = π / (sin(πw) Γ(1-w))
        let pi = Float::with_val(wp, Constant::Pi);
        let one_minus = &Hp::one(wp) - &w;
        let (sin, _) = w.scale(&pi).sin_cos();
        &Hp::from_real(pi) / &(&sin * &gamma_right(&one_minus, a, wp))
    } else {
        gamma_right(&w, a, wp)
    };
    Hp { re: Float::with_val(out_prec, &g.re), im: Float::with_val(out_prec, &g.im) }
}

fn gamma_right(w: &Hp, a: u32, wp: u32) -> Hp {
    let coeffs = spouge_coeffs(a, wp);
    let z = w.add_real(-1.0);
    let (s, _) = spouge_sums(&z, &coeffs);
    let za = z.add_real(a as f64);
    let expo = &(&z.add_real(0.5) * &za.ln()) - &za;
    &expo.exp() * &s
}

/// `ψ(w)` from the logarithmic derivative of Spouge's formula.
fn hp_digamma(w: &Hp, digits: u32) -> Hp {
    let out_prec = w.prec();
    let (a, wp) = spouge_setup(digits + 10);
    let w = Hp { re: Float::with_val(wp, &w.re), im: Float::with_val(wp, &w.im) };
    let half = Float::with_val(wp, 0.5);
    let v = if w.re < half {
        // ψ(w) = ψ(1-w) - π cot(πw)
        let pi = Float::with_val(wp, Constant::Pi);
        let one_minus = &Hp::one(wp) - &w;
        let (sin, cos) = w.scale(&pi).sin_cos();
        let cot = &cos / &sin;
        &digamma_right(&one_minus, a, wp) - &cot.scale(&pi)
    } else {
        digamma_right(&w, a, wp)
    };
    Hp { re: Float::with_val(out_prec, &v.re), im: Float::with_val(out_prec, &v.im) }
}

fn digamma_right(w: &Hp, a: u32, wp: u32) -> Hp {
    let coeffs = spouge_coeffs(a, wp);
    let z = w.add_real(-1.0);
    let (s, ds) = spouge_sums(&z, &coeffs);
    let za = z.add_real(a as f64);
    // ψ(z+1) = ln(z+a) + (z+1/2)/(z+a) - 1 + S'/S
    &(&za.ln() + &(&z.add_real(0.5) / &za)).add_real(-1.0) + &(&ds / &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexVal {
        ComplexVal::new(re, im)
    }

    fn close(v: &OracleValue, want_re: &str, want_im: &str, tol: f64) -> bool {
        let p = v.value.prec();
        let re = Float::with_val(p, Float::parse(want_re).unwrap());
        let im = Float::with_val(p, Float::parse(want_im).unwrap());
        let want = Hp { re, im };
        let d = (&v.value - &want).abs() / want.abs();
        d.to_f64() < tol
    }

    #[test]
    fn trivial_values() {
        let one = oracle_eval(OracleRequest::PartialSum { a: c(0.3, 0.1), b: c(2.0, 0.0), c: c(1.5, 0.0), n: 1 }, 30)
            .unwrap();
        assert_eq!(one.to_complex(), c(1.0, 0.0));
        let g1 = oracle_eval(OracleRequest::Landau(1), 30).unwrap();
        assert_eq!(g1.to_complex(), c(1.25, 0.0));
    }

    #[test]
    fn gamma_and_digamma_reference_values() {
        let g = oracle_eval(OracleRequest::Gamma(c(1.5, 2.0)), 40).unwrap();
        assert!(close(&g, "0.165915108938990954866659265354", "0.14946347326641948738861178617", 1e-28));
        let p = oracle_eval(OracleRequest::Digamma(c(0.5, 1.0)), 40).unwrap();
        assert!(close(&p, "-0.0517616509944125427926029847121", "1.56494051781587928263812450496", 1e-28));
        let r = oracle_eval(OracleRequest::Gamma(c(-0.5, 0.0)), 40).unwrap();
        let want = -2.0 * PI.sqrt();
        assert!((r.to_complex().re - want).abs() < 1e-15);
        let e = oracle_eval(OracleRequest::Digamma(c(1.0, 0.0)), 60).unwrap();
        assert!(close(&e, "-0.5772156649015328606065120900824024310421593359399235988", "0", 1e-55));
    }

    #[test]
    fn reflection_branch_of_digamma() {
        // ψ(-1/2) = 2 - γ - 2 ln 2
        let v = oracle_eval(OracleRequest::Digamma(c(-0.5, 0.0)), 40).unwrap();
        assert!(close(&v, "0.036489973978576520559023667001244433", "0", 1e-28));
    }

    #[test]
    fn partial_sum_reference_values() {
        let v = oracle_eval(
            OracleRequest::PartialSum { a: c(1.0 / 3.0, 0.0), b: c(2.0 / 3.0, 0.0), c: c(1.0, 0.0), n: 40 },
            50,
        )
        .unwrap();
        // exact-rational parameters agree to the f64 rounding of 1/3 and 2/3
        assert!(close(&v, "2.08264422370942795348883365485", "0", 1e-15));
        let g10 = oracle_eval(OracleRequest::Landau(10), 40).unwrap();
        assert!(close(&g10, "1.82238934272027108818292617798", "0", 1e-29));
    }

    #[test]
    fn precision_doubling_is_consistent() {
        for req in [
            OracleRequest::Gamma(c(3.7, -12.5)),
            OracleRequest::Digamma(c(-7.3, 0.4)),
            OracleRequest::PartialSum { a: c(0.75, 1.0), b: c(0.25, 1.0), c: c(-2.0, 2.0), n: 100 },
        ] {
            let lo = oracle_eval(req, 30).unwrap();
            let hi = oracle_eval(req, 60).unwrap();
            let lo_hi = Hp {
                re: Float::with_val(hi.value.prec(), &lo.value.re),
                im: Float::with_val(hi.value.prec(), &lo.value.im),
            };
            let d = ((&lo_hi - &hi.value).abs() / hi.value.abs()).to_f64();
            assert!(d < 1e-25, "{req:?} {d:e}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(oracle_eval(OracleRequest::Landau(3), 20), Err(Error::PrecisionUnavailable(20))));
        assert!(matches!(oracle_eval(OracleRequest::Gamma(c(-2.0, 0.0)), 40), Err(Error::InvalidParameter(_))));
        let bad = OracleRequest::PartialSum { a: c(-1.0, 0.0), b: c(1.0, 0.0), c: c(1.0, 0.0), n: 3 };
        assert!(matches!(oracle_eval(bad, 40), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn compare_reports() {
        let r = oracle_eval(OracleRequest::Landau(1), 30).unwrap();
        let e = compare(c(1.25, 0.0), &r);
        assert_eq!((e.abs_err, e.rel_err), (0.0, 0.0));
        let e = compare(c(1.5, 0.0), &r);
        assert!((e.abs_err - 0.25).abs() < 1e-15 && (e.rel_err - 0.2).abs() < 1e-15);
        assert_eq!(e.reference_precision, 30);
    }
}
