//! Evaluation of `S_n(a,b;c)` by the inverse factorial expansion matching
//! the excess class, plus a tail-controlled `3F2(1)` summer.

use crate::coeffs;
use crate::complexfn::{digamma, gamma_ratio, gamma_ratio_shifted, near_nonpositive_integer, ComplexVal, POLE_TOL};
use crate::dd::{exact_sum, gamma_ratio_dd, rising_ratio, DdComplex, PsiBracket, TermRatio};
use crate::error::{Error, Result};
use crate::params::{ExcessClass, ExcessKind, Flag, ParamSet};
use crate::series::{neumaier_sum, sum_series, SeriesSum};

/// Truncation control for the infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Target size of omitted terms relative to the accumulated sum.
    pub rel_tol: f64,
    pub max_terms: u64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel_tol: 1e-15, max_terms: 1_000_000 }
    }
}

impl Tolerance {
    pub fn new(rel_tol: f64, max_terms: u64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::Domain(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be at least 1".into()));
        }
        Ok(Tolerance { rel_tol, max_terms })
    }
}

/// Result of an evaluation together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub value: ComplexVal,
    pub branch: ExcessClass,
    pub terms_used: u64,
    pub est_error: f64,
    pub warnings: Vec<Flag>,
}

/// Form of the logarithmic-case expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogForm {
    /// Series with a digamma bracket in every term.
    #[default]
    PsiSeries,
    /// `ψ(n+a+b) + c_0(a,b)` plus the correction series in `σ_k(a,b)`.
    Alternative,
}

/// Outcome of [`f32_unit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F32Sum {
    pub value: ComplexVal,
    pub terms_used: u64,
    pub est_error: f64,
    pub max_terms_reached: bool,
}

fn c1(x: f64) -> ComplexVal {
    ComplexVal::new(x, 0.0)
}

/// Parameter combinations formed without rounding, so that `c - a` and
/// friends match the values the caller's f64 inputs define.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Exact {
    pub a: DdComplex,
    pub b: DdComplex,
    pub c: DdComplex,
    pub ab: DdComplex,
    pub ca: DdComplex,
    pub cb: DdComplex,
    pub s: DdComplex,
}

impl Exact {
    pub fn of(p: &ParamSet) -> Self {
        let (a, b, c) = (DdComplex::from(p.a()), DdComplex::from(p.b()), DdComplex::from(p.c()));
        let ca = c.sub(a);
        Exact { a, b, c, ab: a.add(b), ca, cb: c.sub(b), s: ca.sub(b) }
    }
}

/// `Π Γ(num) / Π Γ(den)`, in double-double when possible.
fn gamma_ratio_exact(num: &[DdComplex], den: &[DdComplex]) -> Result<ComplexVal> {
    if let Some(v) = gamma_ratio_dd(num, den) {
        return Ok(v);
    }
    let lower = |zs: &[DdComplex]| zs.iter().map(|z| z.to_complex()).collect::<Vec<_>>();
    gamma_ratio(&lower(num), &lower(den))
}

/// `3F2[num; den; 1]` summed term by term.
pub fn f32_unit(num: [ComplexVal; 3], den: [ComplexVal; 2], tol: &Tolerance) -> Result<F32Sum> {
    f32_unit_dd(num.map(DdComplex::from), den.map(DdComplex::from), tol)
}

fn f32_unit_dd(num_dd: [DdComplex; 3], den_dd: [DdComplex; 2], tol: &Tolerance) -> Result<F32Sum> {
    let num = num_dd.map(|z| z.to_complex());
    let den = den_dd.map(|z| z.to_complex());
    for d in den {
        if !(d.re.is_finite() && d.im.is_finite()) || near_nonpositive_integer(d, POLE_TOL).is_some() {
            return Err(Error::InvalidParameter(format!(
                "denominator parameter {d} is zero or a negative integer"
            )));
        }
    }
    let terminating = num.iter().any(|&z| near_nonpositive_integer(z, POLE_TOL).is_some());
    let excess = den[0] + den[1] - num[0] - num[1] - num[2];
    if excess.re <= 0.0 && !terminating {
        return Err(Error::DivergentSeries(format!(
            "3F2 at unit argument needs positive excess, got {excess}"
        )));
    }
    let mut t = TermRatio::new(num_dd, [den_dd[0], den_dd[1], DdComplex::from(1.0)]);
    let next = |k: u64| -> Result<DdComplex> { Ok(if k == 0 { t.value() } else { t.advance() }) };
    // a terminating series stops on its zero terms whatever the exponent
    let q = if terminating && excess.re < 1.0 { c1(2.0) } else { excess + 1.0 };
    let r = sum_series(next, q, tol)?;
    Ok(F32Sum {
        value: r.value,
        terms_used: r.terms,
        est_error: r.est_error,
        max_terms_reached: r.hit_max,
    })
}

pub(crate) fn wrong_branch(expected: &'static str, class: &ExcessClass) -> Error {
    Error::WrongBranch { expected, found: class.kind.to_string() }
}

fn report(value: ComplexVal, class: ExcessClass, terms_used: u64, est_error: f64, hit_max: bool) -> EvalReport {
    let mut warnings = class.warnings.clone();
    if hit_max {
        warnings.push(Flag::MaxTermsReached);
    }
    EvalReport { value, branch: class, terms_used, est_error, warnings }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(())
}

/// `Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b))`, zero when `c-a` or `c-b` is a pole.
pub(crate) fn gauss_value(p: &ParamSet) -> Result<ComplexVal> {
    let x = Exact::of(p);
    let (ca, cb) = (x.ca.to_complex(), x.cb.to_complex());
    if near_nonpositive_integer(ca, POLE_TOL).is_some() || near_nonpositive_integer(cb, POLE_TOL).is_some() {
        return Ok(c1(0.0));
    }
    gamma_ratio_exact(&[x.c, x.s], &[x.ca, x.cb])
}

/// Largest `n` for which the prefactors are formed as a double-double
/// product instead of in log space.
const DIRECT_PRODUCT_MAX: u64 = 4096;

/// `ω_n Γ(c)/(Γ(a)Γ(b)) = (a)_n(b)_n/((c)_n (n-1)!)`
pub(crate) fn omega_prefactor(p: &ParamSet, n: u64) -> Result<ComplexVal> {
    let (a, b, c) = (p.a(), p.b(), p.c());
    if n <= DIRECT_PRODUCT_MAX {
        if let Some(v) = rising_ratio(n, a, b, c, c1(0.0)) {
            return Ok(v);
        }
    }
    Ok(gamma_ratio_shifted(n as f64, &[a, b], &[c1(0.0), c])? * gamma_ratio(&[c], &[a, b])?)
}

/// `λ_n Γ(a+b)/(Γ(a)Γ(b))`
fn lambda_prefactor(p: &ParamSet, n: u64) -> Result<ComplexVal> {
    let (a, b) = (p.a(), p.b());
    if n <= DIRECT_PRODUCT_MAX {
        let (hi, lo) = exact_sum(a, b);
        if let Some(v) = rising_ratio(n, a, b, hi, lo) {
            return Ok(v);
        }
    }
    let x = Exact::of(p);
    Ok(lambda_n(a, b, n)? * gamma_ratio_exact(&[x.ab], &[x.a, x.b])?)
}

/// `λ_n = Γ(n+a)Γ(n+b)/(Γ(n)Γ(n+a+b))`
pub(crate) fn lambda_n(a: ComplexVal, b: ComplexVal, n: u64) -> Result<ComplexVal> {
    gamma_ratio_shifted(n as f64, &[a, b], &[c1(0.0), a + b])
}

/// Non-integer excess: the Gauss value minus `ω_n Γ(c)/(s Γ(a)Γ(b))` times a
/// `3F2` tail.
pub fn eval_generic(p: &ParamSet, n: u64, tol: &Tolerance) -> Result<EvalReport> {
    check_n(n)?;
    let class = p.classify();
    if class.kind != ExcessKind::Generic {
        return Err(wrong_branch("generic", &class));
    }
    let x = Exact::of(p);
    let nf = n as f64;
    let one = DdComplex::from(1.0);
    let f = f32_unit_dd([x.ca, x.cb, one], [DdComplex::shifted(x.c, nf), DdComplex::shifted(x.s, 1.0)], tol)?;
    let gauss = gauss_value(p)?;
    let pref = DdComplex::from(omega_prefactor(p, n)?).div(x.s).to_complex();
    let tail = pref * f.value;
    let value = gauss - tail;
    let est_error = pref.norm() * f.est_error + 4.0 * f64::EPSILON * (gauss.norm() + tail.norm());
    Ok(report(value, class, f.terms_used, est_error, f.max_terms_reached))
}

/// `Σ_k (a)_k(b)_k/((n+a+b)_k k!) {ψ(n+a+b+k)+ψ(1+k)-ψ(a+k)-ψ(b+k)}`
pub(crate) fn psi_series(a: ComplexVal, b: ComplexVal, n: u64, tol: &Tolerance) -> Result<SeriesSum> {
    let (a_dd, b_dd) = (DdComplex::from(a), DdComplex::from(b));
    let f_dd = DdComplex::shifted(a_dd.add(b_dd), n as f64);
    let f = f_dd.to_complex();
    let mut ratio = TermRatio::new([a_dd, b_dd], [f_dd, DdComplex::from(1.0)]);
    // the bracket is O(1/k), so terms fall off one power faster than the ratio
    let q = c1(n as f64 + 2.0);
    if let Some(mut bracket) = PsiBracket::new(f_dd, a_dd, b_dd) {
        let next = |k: u64| -> Result<DdComplex> {
            Ok(if k == 0 { ratio.value().mul(bracket.value()) } else { ratio.advance().mul(bracket.advance()) })
        };
        return sum_series(next, q, tol);
    }
    let next = |k: u64| -> Result<ComplexVal> {
        let kf = k as f64;
        let t = if k == 0 { ratio.value() } else { ratio.advance() }.to_complex();
        let bracket = digamma(f + kf)? + digamma(c1(1.0 + kf))? - digamma(a + kf)? - digamma(b + kf)?;
        Ok(t * bracket)
    };
    sum_series(next, q, tol)
}

/// `Σ_{k>=1} (a)_k(b)_k/((n+a+b)_k k!) {Σ_{r<k} 1/(n+a+b+r) - σ_k(a,b)}`
fn sigma_series(a: ComplexVal, b: ComplexVal, n: u64, tol: &Tolerance) -> Result<SeriesSum> {
    let (a_dd, b_dd) = (DdComplex::from(a), DdComplex::from(b));
    let f_dd = DdComplex::shifted(a_dd.add(b_dd), n as f64);
    let f = f_dd.to_complex();
    let mut ratio = TermRatio::new([a_dd, b_dd], [f_dd, DdComplex::from(1.0)]);
    let mut bracket = c1(0.0);
    let next = |k: u64| -> Result<ComplexVal> {
        if k == 0 {
            return Ok(c1(0.0));
        }
        let j = (k - 1) as f64;
        let t = ratio.advance().to_complex();
        bracket += (f + j).inv() - (a + j).inv() - (b + j).inv() + 1.0 / (j + 1.0);
        Ok(t * bracket)
    };
    sum_series(next, c1(n as f64 + 1.0), tol)
}

/// Logarithmic case `c = a + b`.
pub fn eval_log(p: &ParamSet, n: u64, tol: &Tolerance, form: LogForm) -> Result<EvalReport> {
    check_n(n)?;
    let class = p.classify();
    if class.kind != ExcessKind::Logarithmic {
        return Err(wrong_branch("logarithmic", &class));
    }
    let (a, b) = (p.a(), p.b());
    let pref = lambda_prefactor(p, n)?;
    match form {
        LogForm::PsiSeries => {
            let r = psi_series(a, b, n, tol)?;
            let value = pref * r.value;
            Ok(report(value, class, r.terms, pref.norm() * r.est_error, r.hit_max))
        }
        LogForm::Alternative => {
            let r = sigma_series(a, b, n, tol)?;
            let x = Exact::of(p);
            let g = gamma_ratio_exact(&[x.ab], &[x.a, x.b])?;
            let lead = g * digamma(a + b + n as f64)?;
            let c0 = coeffs::c0(a, b)?;
            let corr = pref * r.value;
            let value = neumaier_sum([lead, c0, corr]);
            let est_error = pref.norm() * r.est_error
                + 4.0 * f64::EPSILON * (lead.norm() + c0.norm() + corr.norm());
            Ok(report(value, class, r.terms, est_error, r.hit_max))
        }
    }
}

/// Positive integer excess `s = m`: a finite sum.
pub fn eval_pos_int(p: &ParamSet, n: u64) -> Result<EvalReport> {
    check_n(n)?;
    let class = p.classify();
    let m = match class.kind {
        ExcessKind::PositiveInteger { m } => m,
        _ => return Err(wrong_branch("positive_integer", &class)),
    };
    let x = Exact::of(p);
    let nf = n as f64;
    let f = DdComplex::shifted(x.ab, nf);
    let pref = gamma_ratio_exact(
        &[DdComplex::shifted(x.a, nf), DdComplex::shifted(x.b, nf), x.c, DdComplex::from(m as f64)],
        &[DdComplex::from(nf), f, x.ca, x.cb],
    )?;
    let mut ratio = TermRatio::new([x.a, x.b], [f, DdComplex::from(1.0)]);
    let terms: Vec<ComplexVal> =
        (0..m).map(|k| if k == 0 { ratio.value() } else { ratio.advance() }.to_complex()).collect();
    let abs: f64 = terms.iter().map(|t| t.norm()).sum();
    let value = pref * neumaier_sum(terms);
    let est_error = 8.0 * f64::EPSILON * pref.norm() * abs;
    Ok(report(value, class, m as u64, est_error, false))
}

/// `Σ_{k<len} (x)_k(y)_k/((n+c)_k(1-m)_k)` with its absolute-value sum.
pub(crate) fn neg_int_finite(x: DdComplex, y: DdComplex, nc: DdComplex, m: u32, len: u32) -> (ComplexVal, f64) {
    let mut ratio = TermRatio::new([x, y], [nc, DdComplex::from(1.0 - m as f64)]);
    let terms: Vec<ComplexVal> =
        (0..len).map(|k| if k == 0 { ratio.value() } else { ratio.advance() }.to_complex()).collect();
    let abs = terms.iter().map(|t| t.norm()).sum();
    (neumaier_sum(terms), abs)
}

/// Negative integer excess `s = -m` with neither `a` nor `b` in `1..=m`.
pub fn eval_neg_int(p: &ParamSet, n: u64, tol: &Tolerance) -> Result<EvalReport> {
    check_n(n)?;
    let class = p.classify();
    let m = match class.kind {
        ExcessKind::NegativeInteger { m } => m,
        _ => return Err(wrong_branch("negative_integer", &class)),
    };
    let (a, b) = (p.a(), p.b());
    let x = Exact::of(p);
    let nf = n as f64;
    let (fin, fin_abs) = neg_int_finite(x.ca, x.cb, DdComplex::shifted(x.c, nf), m, m);
    let pref1 = omega_prefactor(p, n)? / m as f64;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let pref2 = sign
        * gamma_ratio_exact(
            &[DdComplex::shifted(x.a, nf), DdComplex::shifted(x.b, nf), x.c],
            &[DdComplex::from(nf), DdComplex::shifted(x.ab, nf), x.ca, x.cb, DdComplex::from(m as f64 + 1.0)],
        )?;
    let r = psi_series(a, b, n, tol)?;
    let first = pref1 * fin;
    let second = pref2 * r.value;
    let value = first + second;
    let est_error = pref2.norm() * r.est_error
        + 8.0 * f64::EPSILON * (pref1.norm() * fin_abs + first.norm() + second.norm());
    Ok(report(value, class, r.terms + m as u64, est_error, r.hit_max))
}

/// Conjectured closed form for `s = -m` with `a` or `b` equal to `p` in
/// `1..=m`. Reports carry [`Flag::Conjectural`].
pub fn eval_conjectured(p: &ParamSet, n: u64) -> Result<EvalReport> {
    check_n(n)?;
    let class = p.classify();
    let (m, pp) = match class.kind {
        ExcessKind::DegenerateNegInteger { m, p, .. } => (m, p),
        _ => return Err(wrong_branch("degenerate_negative_integer", &class)),
    };
    let x = Exact::of(p);
    let len = m - pp + 1;
    let mf = m as f64;
    let (fin, fin_abs) = neg_int_finite(
        DdComplex::shifted(x.a, -mf),
        DdComplex::shifted(x.b, -mf),
        DdComplex::shifted(x.c, n as f64),
        m,
        len,
    );
    let pref = omega_prefactor(p, n)? / m as f64;
    let value = pref * fin;
    let est_error = 8.0 * f64::EPSILON * pref.norm() * fin_abs;
    let mut rep = report(value, class, len as u64, est_error, false);
    rep.warnings.push(Flag::Conjectural);
    Ok(rep)
}

/// Dispatch on the excess class.
pub fn eval_auto(p: &ParamSet, n: u64, tol: &Tolerance) -> Result<EvalReport> {
    match p.classify().kind {
        ExcessKind::Generic => eval_generic(p, n, tol),
        ExcessKind::Logarithmic => eval_log(p, n, tol, LogForm::PsiSeries),
        ExcessKind::PositiveInteger { .. } => eval_pos_int(p, n),
        ExcessKind::NegativeInteger { .. } => eval_neg_int(p, n, tol),
        ExcessKind::DegenerateNegInteger { .. } => eval_conjectured(p, n),
    }
}

/// Leading large-`n` behaviour of `S_n(a,b;c)`.
pub fn leading_term(p: &ParamSet, n: u64) -> Result<ComplexVal> {
    check_n(n)?;
    let (a, b, c, s) = (p.a(), p.b(), p.c(), p.s());
    if p.classify().kind == ExcessKind::Logarithmic {
        return Ok(gamma_ratio(&[a + b], &[a, b])? * (n as f64).ln());
    }
    if s.re.abs() < crate::params::INT_TOL {
        return Err(Error::Undefined(format!(
            "leading behaviour for purely imaginary excess {s} is not determined"
        )));
    }
    if s.re > 0.0 {
        gauss_value(p)
    } else {
        let growth = (-s * (n as f64).ln()).exp();
        Ok(gamma_ratio(&[c], &[a, b])? * growth / (-s))
    }
}

/// Plain forward summation of the first `n` terms in f64.
pub fn direct_partial_sum(p: &ParamSet, n: u64) -> ComplexVal {
    let (a, b, c) = (p.a(), p.b(), p.c());
    let mut acc = crate::series::Neumaier::default();
    let mut t = c1(1.0);
    for k in 0..n {
        acc.add(t);
        let kf = k as f64;
        t = t * (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
    }
    acc.value()
}
