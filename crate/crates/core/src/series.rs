//! Tail-controlled summation of slowly convergent series with algebraic
//! term decay `t_k ~ k^{-q}`.
//!
//! Terms are accumulated with Neumaier's compensated summation. When plain
//! summation has not met the tolerance after [`PLAIN_LIMIT`] terms, the
//! partial sums at `64·2^i` terms are extrapolated with Richardson's scheme
//! using the known tail exponents `1-q, -q, -q-1, …`.

use crate::complexfn::ComplexVal;
use crate::dd::DdComplex;
use crate::engine::Tolerance;
use crate::error::{Error, Result};

const PLAIN_LIMIT: u64 = 2048;
const RICHARDSON_BASE: u64 = 64;
const RICHARDSON_LIMIT: u64 = 65536;
const SAFETY: f64 = 10.0;

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: ComplexVal,
    comp: ComplexVal,
}

fn two_sum(acc: f64, x: f64, comp: &mut f64) -> f64 {
    let t = acc + x;
    if acc.abs() >= x.abs() {
        *comp += (acc - t) + x;
    } else {
        *comp += (x - t) + acc;
    }
    t
}

impl Neumaier {
    pub fn add(&mut self, x: ComplexVal) {
        self.sum.re = two_sum(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> ComplexVal {
        self.sum + self.comp
    }
}

/// Sum of a finite sequence of terms.
pub(crate) fn neumaier_sum(terms: impl IntoIterator<Item = ComplexVal>) -> ComplexVal {
    let mut acc = Neumaier::default();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// A series term. Terms from double-double recurrences keep their low part
/// and contribute no rounding noise of their own.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Term {
    hi: ComplexVal,
    lo: ComplexVal,
    exact: bool,
}

impl From<ComplexVal> for Term {
    fn from(z: ComplexVal) -> Self {
        Term { hi: z, lo: ComplexVal::new(0.0, 0.0), exact: false }
    }
}

impl From<DdComplex> for Term {
    fn from(z: DdComplex) -> Self {
        let (hi, lo) = z.split();
        Term { hi, lo, exact: true }
    }
}

/// Accumulator with the bookkeeping for the roundoff estimate.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    sum: Neumaier,
    abs_sum: f64,
    noise: f64,
}

impl Accumulator {
    /// Adds the term and returns its magnitude.
    fn add(&mut self, t: Term) -> f64 {
        self.sum.add(t.hi);
        self.sum.add(t.lo);
        let size = t.hi.norm();
        self.abs_sum += size;
        if !t.exact {
            self.noise += size;
        }
        size
    }

    fn value(&self) -> ComplexVal {
        self.sum.value()
    }

    fn roundoff(&self, terms: u64) -> f64 {
        let eps = f64::EPSILON;
        4.0 * eps * (self.value().norm() + self.noise) + terms as f64 * eps * eps * self.abs_sum
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: ComplexVal,
    pub terms: u64,
    pub est_error: f64,
    pub hit_max: bool,
}

/// Sum `Σ_{k>=0} next(k)`, where `next` is called with `k = 0, 1, 2, …` in
/// order and the terms decay like `k^{-q}` with `Re q > 1`.
pub(crate) fn sum_series<F, T>(mut next: F, q: ComplexVal, tol: &Tolerance) -> Result<SeriesSum>
where
    F: FnMut(u64) -> Result<T>,
    T: Into<Term>,
{
    let qm1 = q.re - 1.0;
    if qm1.is_nan() || qm1 <= 0.0 {
        return Err(Error::DivergentSeries(format!("term decay exponent {q} has real part <= 1")));
    }
    let rel = tol.rel_tol;
    let cap = tol.max_terms;
    let mut next = |k: u64| next(k).map(Into::<Term>::into);
    let mut acc = Accumulator::default();
    let mut small_run = 0;
    let mut checkpoints: Vec<ComplexVal> = Vec::new();
    let mut k = 0u64;
    let plain_cap = PLAIN_LIMIT.min(cap);
    while k < plain_cap {
        let size = acc.add(next(k)?);
        k += 1;
        if is_checkpoint(k) {
            checkpoints.push(acc.value());
        }
        let s = acc.value().norm();
        let tail = size * (k as f64 / qm1).max(1.0);
        if size <= rel * s {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 && tail <= rel * s {
            let value = acc.value();
            let omitted = next(k)?.hi.norm();
            let est_error = SAFETY * omitted * (k as f64 / qm1).max(1.0) + acc.roundoff(k);
            return Ok(SeriesSum { value, terms: k, est_error, hit_max: false });
        }
    }
    if cap <= PLAIN_LIMIT || checkpoints.len() < 2 {
        let value = acc.value();
        let omitted = next(k)?.hi.norm();
        let est_error = SAFETY * omitted * (k as f64 / qm1).max(1.0) + acc.roundoff(k);
        return Ok(SeriesSum { value, terms: k, est_error, hit_max: true });
    }

    let exponent = ComplexVal::new(1.0, 0.0) - q;
    let limit = RICHARDSON_LIMIT.min(cap);
    let mut best: Option<(ComplexVal, f64)> = None;
    let mut level_terms = k;
    loop {
        let top = richardson_top(&checkpoints, exponent);
        let prev = richardson_top(&checkpoints[..checkpoints.len() - 1], exponent);
        let floor = acc.roundoff(k);
        let est = (top - prev).norm() + floor;
        match best {
            Some((_, b)) if est >= b => {
                if est > SAFETY * b {
                    break;
                }
            }
            _ => best = Some((top, est)),
        }
        // the extrapolants agree to within rounding: more terms cannot help
        if est <= rel * top.norm() || est <= 2.0 * floor {
            break;
        }
        let target = 2 * level_terms;
        if target > limit {
            break;
        }
        while k < target {
            acc.add(next(k)?);
            k += 1;
        }
        checkpoints.push(acc.value());
        level_terms = target;
    }
    let (value, est_error) = best.expect("at least one extrapolation level");
    let hit_max = est_error > 100.0 * rel * value.norm().max(f64::MIN_POSITIVE) && k >= limit;
    Ok(SeriesSum { value, terms: k, est_error, hit_max })
}

fn is_checkpoint(k: u64) -> bool {
    k >= RICHARDSON_BASE && k.is_power_of_two()
}

/// Highest-order Richardson value from partial sums at geometrically
/// doubling truncation points, for tail exponents `e, e-1, e-2, …`.
fn richardson_top(sums: &[ComplexVal], e0: ComplexVal) -> ComplexVal {
    let mut row: Vec<ComplexVal> = sums.to_vec();
    let two = ComplexVal::new(2.0, 0.0);
    let mut j = 0.0;
    while row.len() > 1 {
        let f = two.powc(e0 - j);
        let one_minus = ComplexVal::new(1.0, 0.0) - f;
        row = row.windows(2).map(|w| (w[1] - f * w[0]) / one_minus).collect();
        j += 1.0;
    }
    row[0]
}
