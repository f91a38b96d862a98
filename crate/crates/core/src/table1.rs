//! Absolute errors of the truncated logarithmic and negative-integer
//! expansions against oracle partial sums, with the published grid.

use crate::coeffs::{asym_log, asym_neg_int};
use crate::complexfn::ComplexVal;
use crate::error::Result;
use crate::oracle::{compare, oracle_eval, OracleRequest};
use crate::params::ParamSet;

/// Digits used for the reference partial sums.
pub const TABLE_DIGITS: u32 = 50;

/// Relative agreement required with the printed errors.
pub const CELL_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Column {
    pub label: &'static str,
    pub a: ComplexVal,
    pub b: ComplexVal,
    pub c: ComplexVal,
    pub n: u64,
    /// Published absolute errors for k = 1, 2, 3.
    pub printed: [f64; 3],
}

const fn c(re: f64, im: f64) -> ComplexVal {
    ComplexVal::new(re, im)
}

pub const COLUMNS: [Column; 6] = [
    Column {
        label: "a=1/3 b=2/3 n=40",
        a: c(1.0 / 3.0, 0.0),
        b: c(2.0 / 3.0, 0.0),
        c: c(1.0, 0.0),
        n: 40,
        printed: [1.711e-5, 9.618e-8, 9.845e-10],
    },
    Column {
        label: "a=3/2 b=1/2 n=50",
        a: c(1.5, 0.0),
        b: c(0.5, 0.0),
        c: c(2.0, 0.0),
        n: 50,
        printed: [2.616e-4, 4.954e-6, 9.922e-8],
    },
    Column {
        label: "a=1/2+i b=1/4 n=100",
        a: c(0.5, 1.0),
        b: c(0.25, 0.0),
        c: c(0.75, 1.0),
        n: 100,
        printed: [1.545e-5, 1.291e-7, 1.227e-9],
    },
    Column {
        label: "a=4/3 b=1/3 c=-7/3 n=40",
        a: c(4.0 / 3.0, 0.0),
        b: c(1.0 / 3.0, 0.0),
        c: c(-7.0 / 3.0, 0.0),
        n: 40,
        printed: [9.820e-5, 1.601e-6, 2.812e-8],
    },
    Column {
        label: "a=3/2 b=-1/4 c=1/4 n=50",
        a: c(1.5, 0.0),
        b: c(-0.25, 0.0),
        c: c(0.25, 0.0),
        n: 50,
        printed: [9.654e-6, 6.888e-7, 4.141e-11],
    },
    Column {
        label: "a=3/4+i b=1/4+i c=-2+2i n=100",
        a: c(0.75, 1.0),
        b: c(0.25, 1.0),
        c: c(-2.0, 2.0),
        n: 100,
        printed: [6.556e-5, 9.752e-7, 1.520e-8],
    },
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub column: usize,
    pub k: usize,
    pub computed: f64,
    pub printed: f64,
}

impl Cell {
    pub fn rel_dev(&self) -> f64 {
        (self.computed / self.printed - 1.0).abs()
    }

    pub fn passes(&self) -> bool {
        self.rel_dev() <= CELL_TOL
    }
}

/// Errors for one column, k = 1, 2, 3.
pub fn column_errors(col: &Column, digits: u32) -> Result<[f64; 3]> {
    let p = ParamSet::new(col.a, col.b, col.c)?;
    let reference = oracle_eval(OracleRequest::PartialSum { a: col.a, b: col.b, c: col.c, n: col.n }, digits)?;
    let logarithmic = p.s().norm() < 0.5;
    let mut out = [0.0; 3];
    for (k, slot) in (1..=3).zip(out.iter_mut()) {
        let v = if logarithmic { asym_log(col.a, col.b, col.n, k)? } else { asym_neg_int(&p, col.n, k)? };
        *slot = compare(v, &reference).abs_err;
    }
    Ok(out)
}

/// All 18 cells, column-major.
pub fn compute(digits: u32) -> Result<Vec<Cell>> {
    let mut cells = Vec::with_capacity(18);
    for (i, col) in COLUMNS.iter().enumerate() {
        let errs = column_errors(col, digits)?;
        for (k, (&computed, &printed)) in errs.iter().zip(&col.printed).enumerate() {
            cells.push(Cell { column: i, k: k + 1, computed, printed });
        }
    }
    Ok(cells)
}
