//! Landau constants `G_n = Σ_{k=0}^{n} Γ²(k+1/2)/(π (k!)²) = S_{n+1}(1/2,1/2;1)`.
//!
//! Every function takes the index `n` of `G_n`. Formulas written in terms of
//! `S_N` use `N = n + 1` internally.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::coeffs::{c_coeffs, g_poly, remainder_bound, sigma_half_recurrence};
use crate::complexfn::{digamma, gamma_ratio, pochhammer, ComplexVal, EULER_GAMMA};
use crate::engine::{psi_series, Tolerance};
use crate::error::{Error, Result};
use crate::series::{neumaier_sum, sum_series, Neumaier};

/// `(γ + 4 log 2)/π`, the constant term `c_0(1/2, 1/2)`.
pub const C0_HALF: f64 = (EULER_GAMMA + 4.0 * LN_2) / PI;

const DIRECT_MAX: u64 = 1_000_000;
const THEOREM3_MAX_M: u64 = 30;

fn c1(x: f64) -> ComplexVal {
    ComplexVal::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandauMethod {
    Direct,
    Watson,
    Ck,
    Theorem3,
    Asymptotic,
    WatsonAsymptotic,
    Nemes,
}

impl LandauMethod {
    pub const ALL: [LandauMethod; 7] = [
        LandauMethod::Direct,
        LandauMethod::Watson,
        LandauMethod::Ck,
        LandauMethod::Theorem3,
        LandauMethod::Asymptotic,
        LandauMethod::WatsonAsymptotic,
        LandauMethod::Nemes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LandauMethod::Direct => "direct",
            LandauMethod::Watson => "watson",
            LandauMethod::Ck => "ck",
            LandauMethod::Theorem3 => "thm3",
            LandauMethod::Asymptotic => "asym",
            LandauMethod::WatsonAsymptotic => "watson_asym",
            LandauMethod::Nemes => "nemes",
        }
    }
}

impl fmt::Display for LandauMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LandauMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        LandauMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}'"))
    }
}

/// Term-by-term sum with `t_{k+1} = t_k ((k+1/2)/(k+1))²`.
pub fn landau_direct(n: u64) -> Result<f64> {
    if n > DIRECT_MAX {
        return Err(Error::Domain(format!("direct summation is limited to n <= {DIRECT_MAX}")));
    }
    let mut acc = Neumaier::default();
    let mut t = 1.0;
    for k in 0..=n {
        acc.add(c1(t));
        let r = (k as f64 + 0.5) / (k as f64 + 1.0);
        t *= r * r;
    }
    Ok(acc.value().re)
}

/// Watson's convergent digamma series.
pub fn landau_watson(n: u64, tol: &Tolerance) -> Result<f64> {
    let big_n = n + 1;
    let nf = big_n as f64;
    let half = c1(0.5);
    let lam = gamma_ratio(&[c1(nf + 0.5), c1(nf + 0.5)], &[c1(nf), c1(nf + 1.0)])?;
    let r = psi_series(half, half, big_n, tol)?;
    Ok((lam * r.value).re / PI)
}

/// Cvijović–Klinowski inverse factorial expansion.
pub fn landau_ck(n: u64, tol: &Tolerance) -> Result<f64> {
    let f = n as f64 + 1.5;
    let mut t = 1.0;
    let next = |k: u64| -> Result<ComplexVal> {
        if k == 0 {
            return Ok(c1(0.0));
        }
        let j = (k - 1) as f64;
        t *= (j + 0.5) * (j + 0.5) / ((f + j) * (j + 1.0));
        Ok(c1(t / k as f64))
    };
    let tail = sum_series(next, c1(n as f64 + 2.5), tol)?;
    let lead = digamma(c1(f))?.re + EULER_GAMMA + 4.0 * LN_2;
    Ok((lead - tail.value.re) / PI)
}

/// Value of `G_n` from the rearranged finite expansion with `M` retained
/// orders, together with the remainder bound.
pub fn landau_theorem3(n: u64, m: u64) -> Result<(f64, f64)> {
    let big_n = n + 1;
    let k = m.div_ceil(2);
    if m == 0 || m > THEOREM3_MAX_M {
        return Err(Error::Domain(format!("M must lie in 1..={THEOREM3_MAX_M}, got {m}")));
    }
    if big_n <= k || big_n <= m {
        return Err(Error::Domain(format!(
            "expansion needs n + 1 > M (and > K = {k}); got n = {n}, M = {m}"
        )));
    }
    let nf = big_n as f64;
    let half = c1(0.5);
    let mut parts = vec![digamma(c1(nf + 1.0))? / PI, c1(C0_HALF)];
    let mut prod = 1.0;
    for r in 1..k {
        let rf = r as f64;
        prod *= nf * nf - rf * rf;
        let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
        parts.push(sign * pochhammer(half, r).powi(2) / (rf * prod * PI));
    }
    let lam = gamma_ratio(&[c1(nf + 0.5), c1(nf + 0.5)], &[c1(nf), c1(nf + 1.0)])?;
    let sigma = sigma_half_recurrence(m.saturating_sub(1) as usize);
    let mut t = c1(1.0);
    for (i, s) in sigma.iter().enumerate() {
        let j = i as f64;
        t = t * (j + 0.5) * (j + 0.5) / ((nf + 1.0 + j) * (j + 1.0));
        parts.push(-lam * t * s.to_f64() / PI);
    }
    let value = neumaier_sum(parts).re;
    Ok((value, remainder_bound(big_n, m)?))
}

/// Inverse-power asymptotic expansion with `K <= 6` correction terms.
pub fn landau_asymptotic(n: u64, k_max: usize) -> Result<f64> {
    if k_max > 6 {
        return Err(Error::Domain(format!("at most 6 correction terms are known, got {k_max}")));
    }
    let big_n = n + 1;
    if big_n < 10 {
        return Err(Error::Domain(format!("asymptotic expansion needs n >= 9, got {n}")));
    }
    let nf = big_n as f64;
    let c = c_coeffs();
    let mut corr = 0.0;
    let mut pw = 1.0;
    for k in 1..=k_max {
        pw /= -nf;
        corr += c.get(k).expect("six coefficients").re * pw;
    }
    Ok(digamma(c1(nf + 1.0))?.re / PI + C0_HALF + corr / PI)
}

/// Watson's three-term asymptotic expansion.
pub fn landau_watson_asymptotic(n: u64) -> f64 {
    let m = n as f64 + 1.0;
    (m.ln() + EULER_GAMMA + 4.0 * LN_2) / PI - 1.0 / (4.0 * PI * m) + 5.0 / (192.0 * PI * m * m)
}

/// Nemes's shifted expansion with `K <= 3` terms and shift `0 < h < 3/2`.
pub fn landau_nemes(n: u64, h: f64, k_max: usize) -> Result<f64> {
    if !(h > 0.0 && h < 1.5) {
        return Err(Error::Domain(format!("shift h must lie in (0, 3/2), got {h}")));
    }
    if k_max > 3 {
        return Err(Error::Domain(format!("at most 3 correction terms are known, got {k_max}")));
    }
    let x = n as f64 + h;
    let mut corr = 0.0;
    let mut pw = 1.0;
    for k in 1..=k_max {
        pw /= x;
        corr += g_poly(k, h)? * pw;
    }
    Ok((x.ln() + EULER_GAMMA + 4.0 * LN_2 - corr) / PI)
}

/// Settings for methods that take extra arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauOptions {
    pub tol: Tolerance,
    /// `M` for the finite expansion, `K` for the asymptotic ones.
    pub terms: Option<usize>,
    pub h: f64,
}

impl Default for LandauOptions {
    fn default() -> Self {
        LandauOptions { tol: Tolerance::default(), terms: None, h: 1.0 }
    }
}

/// Evaluate `G_n` by the given method.
pub fn landau(method: LandauMethod, n: u64, opts: &LandauOptions) -> Result<f64> {
    match method {
        LandauMethod::Direct => landau_direct(n),
        LandauMethod::Watson => landau_watson(n, &opts.tol),
        LandauMethod::Ck => landau_ck(n, &opts.tol),
        LandauMethod::Theorem3 => landau_theorem3(n, opts.terms.unwrap_or(10) as u64).map(|v| v.0),
        LandauMethod::Asymptotic => landau_asymptotic(n, opts.terms.unwrap_or(6)),
        LandauMethod::WatsonAsymptotic => Ok(landau_watson_asymptotic(n)),
        LandauMethod::Nemes => landau_nemes(n, opts.h, opts.terms.unwrap_or(3)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G10: f64 = 1.82238934272027108818;
    const G50: f64 = 2.31625772335252034383;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn direct_examples() {
        assert_eq!(landau_direct(0).unwrap(), 1.0);
        assert_eq!(landau_direct(1).unwrap(), 1.25);
        assert!((landau_direct(10).unwrap() - G10).abs() < 1e-15);
        assert!(landau_direct(DIRECT_MAX + 1).is_err());
    }

    #[test]
    fn series_formulas_match_direct() {
        for n in [0u64, 1, 10, 50] {
            let d = landau_direct(n).unwrap();
            assert!((landau_watson(n, &tol()).unwrap() / d - 1.0).abs() < 1e-12, "watson {n}");
            assert!((landau_ck(n, &tol()).unwrap() / d - 1.0).abs() < 1e-12, "ck {n}");
        }
        assert!((landau_ck(50, &tol()).unwrap() - G50).abs() < 1e-13);
    }

    #[test]
    fn theorem3_respects_its_bound() {
        for (n, m) in [(50u64, 5u64), (100, 8), (200, 10)] {
            let (v, bound) = landau_theorem3(n, m).unwrap();
            assert!((v - landau_direct(n).unwrap()).abs() <= bound, "{n} {m}");
        }
        let (v, _) = landau_theorem3(100, 8).unwrap();
        assert!((v - landau_direct(100).unwrap()).abs() <= 1e-12);
        assert!(landau_theorem3(5, 10).is_err());
        assert!(landau_theorem3(100, 31).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        let k0 = landau_asymptotic(99, 0).unwrap();
        assert!((k0 - (digamma(c1(101.0)).unwrap().re / PI + C0_HALF)).abs() < 1e-15);
        let v = landau_asymptotic(99, 6).unwrap();
        assert!((v - landau_direct(99).unwrap()).abs() < 1e-13);
        assert!(landau_asymptotic(5, 3).is_err());
        assert!(landau_asymptotic(50, 7).is_err());
    }

    #[test]
    fn watson_asymptotic_example() {
        let v = landau_watson_asymptotic(100);
        assert!((v - landau_direct(100).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn nemes_examples() {
        let v = landau_nemes(200, 1.0, 3).unwrap();
        assert!((v - landau_direct(200).unwrap()).abs() < 1e-8);
        assert!(landau_nemes(200, 1.5, 3).is_err());
        assert!(landau_nemes(200, 0.0, 3).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in LandauMethod::ALL {
            assert_eq!(m.name().parse::<LandauMethod>().unwrap(), m);
        }
    }
}
