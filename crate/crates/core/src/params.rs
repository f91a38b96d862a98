//! Parameter validation and classification of the parametric excess
//! `s = c - a - b`.

use std::fmt;

use serde::Serialize;

use crate::complexfn::{gamma_ratio_shifted, ComplexVal};
use crate::error::{Error, Result};

/// Distance below which a value counts as an integer.
pub const INT_TOL: f64 = 1e-9;

/// Upper edge of the band `[INT_TOL, NEAR_INT_BAND)` in which a generic
/// excess is flagged as nearly integer.
pub const NEAR_INT_BAND: f64 = 1e-4;

/// Condition flags attached to classifications and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// `s` is close to, but not within `INT_TOL` of, an integer. The generic
    /// expansion loses digits to cancellation between `1/s` and `Γ(s)`.
    NearIntegerExcess,
    /// `c - a` or `c - b` is a nonpositive integer.
    ExcludedDifference,
    /// Value comes from the conjectured degenerate-case formula.
    Conjectural,
    /// A series was cut off by `max_terms` before meeting its tolerance.
    MaxTermsReached,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::NearIntegerExcess => "near_integer_excess",
            Flag::ExcludedDifference => "excluded_difference",
            Flag::Conjectural => "conjectural",
            Flag::MaxTermsReached => "max_terms_reached",
        }
    }
}

/// Which of `a`, `b` is the positive integer in a degenerate case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ExcessKind {
    Generic,
    /// `s = 0`
    Logarithmic,
    /// `s = m >= 1`
    PositiveInteger { m: u32 },
    /// `s = -m`, neither `a` nor `b` in `1..=m`
    NegativeInteger { m: u32 },
    /// `s = -m` with `a` or `b` equal to `p` in `1..=m`
    DegenerateNegInteger { m: u32, p: u32, which: Which },
}

impl ExcessKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExcessKind::Generic => "generic",
            ExcessKind::Logarithmic => "logarithmic",
            ExcessKind::PositiveInteger { .. } => "positive_integer",
            ExcessKind::NegativeInteger { .. } => "negative_integer",
            ExcessKind::DegenerateNegInteger { .. } => "degenerate_negative_integer",
        }
    }
}

impl fmt::Display for ExcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExcessKind::Generic | ExcessKind::Logarithmic => f.write_str(self.name()),
            ExcessKind::PositiveInteger { m } | ExcessKind::NegativeInteger { m } => {
                write!(f, "{}(m={m})", self.name())
            }
            ExcessKind::DegenerateNegInteger { m, p, which } => {
                let w = match which {
                    Which::A => "a",
                    Which::B => "b",
                };
                write!(f, "{}(m={m}, p={p}, which={w})", self.name())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcessClass {
    pub kind: ExcessKind,
    pub warnings: Vec<Flag>,
}

/// Validated parameter triple with its excess.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    a: ComplexVal,
    b: ComplexVal,
    c: ComplexVal,
    s: ComplexVal,
}

/// Nearest integer to `z` when `z` lies within `INT_TOL` of it.
pub fn near_integer(z: ComplexVal) -> Option<i64> {
    let r = z.re.round();
    if z.im.abs() < INT_TOL && (z.re - r).abs() < INT_TOL {
        Some(r as i64)
    } else {
        None
    }
}

fn is_excluded(z: ComplexVal) -> bool {
    matches!(near_integer(z), Some(k) if k <= 0)
}

impl ParamSet {
    pub fn new(a: ComplexVal, b: ComplexVal, c: ComplexVal) -> Result<Self> {
        for (name, z) in [("a", a), ("b", b), ("c", c)] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {z} is not finite")));
            }
            if is_excluded(z) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {z} is zero or a negative integer"
                )));
            }
        }
        Ok(ParamSet { a, b, c, s: c - a - b })
    }

    /// Real-parameter shorthand.
    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(ComplexVal::new(a, 0.0), ComplexVal::new(b, 0.0), ComplexVal::new(c, 0.0))
    }

    pub fn a(&self) -> ComplexVal {
        self.a
    }

    pub fn b(&self) -> ComplexVal {
        self.b
    }

    pub fn c(&self) -> ComplexVal {
        self.c
    }

    /// Parametric excess `c - a - b`.
    pub fn s(&self) -> ComplexVal {
        self.s
    }

    pub fn classify(&self) -> ExcessClass {
        classify_valid(self)
    }
}

/// Classify the excess of `(a, b, c)`.
pub fn classify(a: ComplexVal, b: ComplexVal, c: ComplexVal) -> Result<ExcessClass> {
    Ok(classify_valid(&ParamSet::new(a, b, c)?))
}

fn positive_int_at_most(z: ComplexVal, m: i64) -> Option<u32> {
    match near_integer(z) {
        Some(k) if (1..=m).contains(&k) => Some(k as u32),
        _ => None,
    }
}

fn classify_valid(p: &ParamSet) -> ExcessClass {
    let s = p.s;
    let mut warnings = Vec::new();
    let kind = match near_integer(s) {
        Some(0) => ExcessKind::Logarithmic,
        Some(m) if m > 0 => ExcessKind::PositiveInteger { m: m as u32 },
        Some(neg) => {
            let m = -neg;
            let pa = positive_int_at_most(p.a, m);
            let pb = positive_int_at_most(p.b, m);
            match (pa, pb) {
                (None, None) => ExcessKind::NegativeInteger { m: m as u32 },
                // Terms beyond k = m - max(pa, pb) vanish, so the larger
                // one fixes the length of the finite sum.
                (Some(x), Some(y)) if y > x => {
                    ExcessKind::DegenerateNegInteger { m: m as u32, p: y, which: Which::B }
                }
                (Some(x), _) => ExcessKind::DegenerateNegInteger { m: m as u32, p: x, which: Which::A },
                (None, Some(y)) => ExcessKind::DegenerateNegInteger { m: m as u32, p: y, which: Which::B },
            }
        }
        None => {
            let dist = (s - s.re.round()).norm();
            if dist < NEAR_INT_BAND {
                warnings.push(Flag::NearIntegerExcess);
            }
            ExcessKind::Generic
        }
    };
    if !matches!(kind, ExcessKind::DegenerateNegInteger { .. })
        && (is_excluded(p.c - p.a) || is_excluded(p.c - p.b))
    {
        warnings.push(Flag::ExcludedDifference);
    }
    ExcessClass { kind, warnings }
}

/// The prefactors `ω_n` and `λ_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeqFactors {
    pub omega_n: ComplexVal,
    pub lambda_n: ComplexVal,
}

/// `ω_n = Γ(n+a)Γ(n+b)/(Γ(n)Γ(n+c))` and `λ_n = Γ(n+a)Γ(n+b)/(Γ(n)Γ(n+a+b))`.
pub fn seq_factors(p: &ParamSet, n: u64) -> Result<SeqFactors> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let nf = n as f64;
    let zero = ComplexVal::new(0.0, 0.0);
    let omega_n = gamma_ratio_shifted(nf, &[p.a, p.b], &[p.c, zero])?;
    let lambda_n = gamma_ratio_shifted(nf, &[p.a, p.b], &[p.a + p.b, zero])?;
    Ok(SeqFactors { omega_n, lambda_n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> ComplexVal {
        ComplexVal::new(x, 0.0)
    }

    #[test]
    fn classify_examples() {
        let k = |a, b, c| classify(r(a), r(b), r(c)).unwrap().kind;
        assert_eq!(k(1.0 / 3.0, 2.0 / 3.0, 1.0), ExcessKind::Logarithmic);
        assert_eq!(k(4.0 / 3.0, 1.0 / 3.0, -7.0 / 3.0), ExcessKind::NegativeInteger { m: 4 });
        assert_eq!(k(0.5, 0.5, 2.0), ExcessKind::PositiveInteger { m: 1 });
        assert_eq!(
            k(1.0, 0.5, -0.5),
            ExcessKind::DegenerateNegInteger { m: 2, p: 1, which: Which::A }
        );
        assert!(matches!(classify(r(0.5), r(-2.0), r(1.0)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn complex_excess_is_generic() {
        let c = classify(r(0.5), r(0.5), ComplexVal::new(1.0, 1e-6)).unwrap();
        assert_eq!(c.kind, ExcessKind::Generic);
        assert_eq!(c.warnings, vec![Flag::NearIntegerExcess]);
    }

    #[test]
    fn warning_band() {
        let w = |c: f64| classify(r(0.5), r(0.5), r(c)).unwrap();
        assert_eq!(w(2.0 + 1e-6).warnings, vec![Flag::NearIntegerExcess]);
        assert!(w(2.0 + 1e-3).warnings.is_empty());
        assert_eq!(w(2.0 + 1e-11).kind, ExcessKind::PositiveInteger { m: 1 });
    }

    #[test]
    fn excluded_difference_is_flagged() {
        // c - a = -1
        let c = classify(r(2.5), r(0.3), r(1.5)).unwrap();
        assert!(c.warnings.contains(&Flag::ExcludedDifference));
    }

    #[test]
    fn degenerate_with_both_integers() {
        let c = classify(r(1.0), r(2.0), r(1.0)).unwrap();
        assert_eq!(c.kind, ExcessKind::DegenerateNegInteger { m: 2, p: 2, which: Which::B });
    }

    #[test]
    fn seq_factor_examples() {
        let p = ParamSet::real(0.5, 0.5, 1.0).unwrap();
        let f = seq_factors(&p, 1).unwrap();
        assert!((f.lambda_n.re - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(f.omega_n, f.lambda_n);
        let q = ParamSet::real(1.0 / 3.0, 2.0 / 3.0, 1.0).unwrap();
        let l40 = seq_factors(&q, 40).unwrap().lambda_n.re;
        assert!((l40 - 0.994459975870179784647).abs() < 1e-15);
        assert!(seq_factors(&p, 0).is_err());
    }
}
