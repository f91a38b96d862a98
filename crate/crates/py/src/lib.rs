//! Python bindings for `hypersum`.

use hypersum::engine::{self, LogForm};
use hypersum::landau::{self, LandauMethod, LandauOptions};
use hypersum::oracle::{self, OracleRequest};
use hypersum::params::{ExcessKind, ParamSet};
use hypersum::{table1, Tolerance};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: hypersum::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params(a: Complex64, b: Complex64, c: Complex64) -> PyResult<ParamSet> {
    ParamSet::new(a, b, c).map_err(err)
}

/// S_n(a,b;c) with its branch, term count, error estimate and warnings.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (a, b, c, n, rel_tol=1e-15, max_terms=1_000_000, form="psi"))]
fn partial_sum<'py>(
    py: Python<'py>,
    a: Complex64,
    b: Complex64,
    c: Complex64,
    n: u64,
    rel_tol: f64,
    max_terms: u64,
    form: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params(a, b, c)?;
    let tol = Tolerance::new(rel_tol, max_terms).map_err(err)?;
    let form = match form {
        "psi" => LogForm::PsiSeries,
        "alt" => LogForm::Alternative,
        other => return Err(PyValueError::new_err(format!("form must be 'psi' or 'alt', got {other:?}"))),
    };
    let r = match p.classify().kind {
        ExcessKind::Logarithmic => engine::eval_log(&p, n, &tol, form),
        _ => engine::eval_auto(&p, n, &tol),
    }
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("value", r.value)?;
    d.set_item("branch", r.branch.kind.name())?;
    d.set_item("terms_used", r.terms_used)?;
    d.set_item("est_error", r.est_error)?;
    d.set_item("warnings", r.warnings.iter().map(|w| w.as_str()).collect::<Vec<_>>())?;
    Ok(d)
}

/// Name of the excess class of (a, b, c).
#[pyfunction]
fn classify(a: Complex64, b: Complex64, c: Complex64) -> PyResult<String> {
    Ok(params(a, b, c)?.classify().kind.to_string())
}

/// Landau constant G_n by the named method.
#[pyfunction]
#[pyo3(signature = (n, method="direct", terms=None, h=1.0))]
fn landau_constant(n: u64, method: &str, terms: Option<usize>, h: f64) -> PyResult<f64> {
    let method: LandauMethod = method.parse().map_err(PyValueError::new_err)?;
    let opts = LandauOptions { terms, h, ..LandauOptions::default() };
    landau::landau(method, n, &opts).map_err(err)
}

/// Reference partial sum from the extended-precision oracle, rounded to complex.
#[pyfunction]
#[pyo3(signature = (a, b, c, n, digits=40))]
fn oracle_partial_sum(a: Complex64, b: Complex64, c: Complex64, n: u64, digits: u32) -> PyResult<Complex64> {
    oracle::oracle_eval(OracleRequest::PartialSum { a, b, c, n }, digits).map(|v| v.to_complex()).map_err(err)
}

/// The published error grid as (column, k, computed, printed) tuples.
#[pyfunction]
#[pyo3(signature = (digits=table1::TABLE_DIGITS))]
fn table1_cells(digits: u32) -> PyResult<Vec<(String, usize, f64, f64)>> {
    let cells = table1::compute(digits).map_err(err)?;
    Ok(cells
        .into_iter()
        .map(|c| (table1::COLUMNS[c.column].label.to_string(), c.k, c.computed, c.printed))
        .collect())
}

#[pymodule]
fn pyhypersum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(partial_sum, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(landau_constant, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_partial_sum, m)?)?;
    m.add_function(wrap_pyfunction!(table1_cells, m)?)?;
    Ok(())
}
