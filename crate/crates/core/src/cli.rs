//! Command-line front end. Output is JSON by default, CSV on request; all
//! floating-point values are written as decimal strings with 17
//! significant digits.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde_json::{json, Value};

use crate::coeffs::{self, CoefficientTable};
use crate::complexfn::ComplexVal;
use crate::engine::{self, LogForm, Tolerance};
use crate::landau::{self, LandauMethod, LandauOptions};
use crate::oracle;
use crate::params::{self, ExcessKind, ParamSet};
use crate::table1;
use crate::verify::{self, VerifyOptions};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hypersum", version, about = "Partial sums of 2F1 at unit argument and the Landau constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate S_n(a,b;c)
    Eval(EvalArgs),
    /// Report the excess class of (a,b,c)
    Classify(Triple),
    /// Landau constant G_n
    Landau(LandauArgs),
    /// Coefficient families of the asymptotic expansions
    Coeffs(CoeffArgs),
    /// Reproduce the published error table
    Table1(Table1Args),
    /// Run the property suite; exits 3 if any check fails
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Triple {
    #[arg(short, allow_hyphen_values = true, value_parser = parse_complex)]
    a: ComplexVal,
    #[arg(short, allow_hyphen_values = true, value_parser = parse_complex)]
    b: ComplexVal,
    #[arg(short, allow_hyphen_values = true, value_parser = parse_complex)]
    c: ComplexVal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    Psi,
    Alt,
}

#[derive(Debug, Args)]
struct Format {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    p: Triple,
    #[arg(short)]
    n: u64,
    /// Relative truncation tolerance
    #[arg(long, default_value_t = 1e-15)]
    tol: f64,
    /// Form of the logarithmic-case expansion
    #[arg(long, value_enum, default_value_t = Form::Psi)]
    form: Form,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Args)]
struct LandauArgs {
    #[arg(short)]
    n: u64,
    /// direct, watson, ck, thm3, asym, watson_asym, nemes or all
    #[arg(long, default_value = "direct", value_parser = parse_method)]
    method: MethodChoice,
    /// Nemes shift parameter
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// M for thm3, K for asym and nemes
    #[arg(long)]
    terms: Option<usize>,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Sigma,
    #[value(name = "A")]
    A,
    #[value(name = "C")]
    C,
    #[value(name = "g")]
    G,
    Lambda,
}

#[derive(Debug, Args)]
struct CoeffArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(short, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0.5")]
    a: ComplexVal,
    #[arg(short, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0.5")]
    b: ComplexVal,
    /// Number of coefficients
    #[arg(long)]
    k: Option<usize>,
    /// Argument of the Nemes polynomials
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Args)]
struct Table1Args {
    #[arg(long, value_parser = clap::value_parser!(u32).range(30..=4000))]
    digits: Option<u32>,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    cases: usize,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Clone, Copy)]
enum MethodChoice {
    One(LandauMethod),
    All,
}

fn parse_method(s: &str) -> Result<MethodChoice, String> {
    if s == "all" {
        return Ok(MethodChoice::All);
    }
    s.parse().map(MethodChoice::One)
}

/// Parse `re`, `re+imi`, `re-imi` or `imi`.
pub fn parse_complex(s: &str) -> Result<ComplexVal, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("'{s}' is not a number of the form re[+im i]");
    let num = |x: &str| x.parse::<f64>().ok().filter(|v| v.is_finite());
    let Some(body) = t.strip_suffix('i') else {
        return num(&t).map(|re| ComplexVal::new(re, 0.0)).ok_or_else(bad);
    };
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (num(&body[..i]).ok_or_else(bad)?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => num(x).ok_or_else(bad)?,
    };
    Ok(ComplexVal::new(re, im))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

/// Oracle precision from the environment; a bad value is a usage error.
fn env_digits() -> Result<u32, Failure> {
    oracle::default_digits().map_err(|e| Failure::Usage(format!("{}: {e}", oracle::DIGITS_ENV)))
}

struct Output {
    body: String,
    code: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: EXIT_OK }
    }
}

fn render_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    for row in rows {
        out.push('\n');
        out.push_str(&row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
    }
    out
}

/// Run the CLI with `args` (including the program name), writing to the
/// process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Like [`run`], with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Classify(t) => classify(t),
        Command::Landau(a) => landau_cmd(a),
        Command::Coeffs(a) => coeffs_cmd(a),
        Command::Table1(a) => table1_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.body);
            o.code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn param_set(t: &Triple) -> crate::Result<ParamSet> {
    ParamSet::new(t.a, t.b, t.c)
}

fn eval(args: EvalArgs) -> Result<Output, Failure> {
    let p = param_set(&args.p)?;
    let tol = Tolerance::new(args.tol, Tolerance::default().max_terms)?;
    let r = match (args.form, p.classify().kind) {
        (Form::Alt, ExcessKind::Logarithmic) => engine::eval_log(&p, args.n, &tol, LogForm::Alternative)?,
        _ => engine::eval_auto(&p, args.n, &tol)?,
    };
    let warnings: Vec<&str> = r.warnings.iter().map(|w| w.as_str()).collect();
    if args.format.csv {
        let header = ["value_re", "value_im", "branch", "terms_used", "est_error", "warnings"];
        let row = vec![
            num(r.value.re),
            num(r.value.im),
            r.branch.kind.name().to_string(),
            r.terms_used.to_string(),
            num(r.est_error),
            warnings.join(";"),
        ];
        return Ok(Output::ok(render_csv(&header, &[row])));
    }
    Ok(Output::ok(render_json(&json!({
        "value_re": num(r.value.re),
        "value_im": num(r.value.im),
        "branch": r.branch.kind.name(),
        "terms_used": r.terms_used,
        "est_error": num(r.est_error),
        "warnings": warnings,
    }))))
}

fn classify(t: Triple) -> Result<Output, Failure> {
    let class = params::classify(t.a, t.b, t.c)?;
    let s = t.c - t.a - t.b;
    let mut v = json!({
        "branch": class.kind.name(),
        "s_re": num(s.re),
        "s_im": num(s.im),
        "warnings": class.warnings.iter().map(|w| w.as_str()).collect::<Vec<_>>(),
    });
    match class.kind {
        ExcessKind::PositiveInteger { m } | ExcessKind::NegativeInteger { m } => v["m"] = json!(m),
        ExcessKind::DegenerateNegInteger { m, p, which } => {
            v["m"] = json!(m);
            v["p"] = json!(p);
            v["which"] = json!(which);
        }
        ExcessKind::Generic | ExcessKind::Logarithmic => {}
    }
    Ok(Output::ok(render_json(&v)))
}

fn landau_cmd(args: LandauArgs) -> Result<Output, Failure> {
    let opts = LandauOptions { tol: Tolerance::default(), terms: args.terms, h: args.h };
    let methods: Vec<LandauMethod> = match args.method {
        MethodChoice::One(m) => vec![m],
        MethodChoice::All => LandauMethod::ALL.to_vec(),
    };
    let mut code = EXIT_OK;
    let mut rows = Vec::new();
    for m in methods {
        let entry = match m {
            LandauMethod::Theorem3 => landau::landau_theorem3(args.n, args.terms.unwrap_or(10) as u64)
                .map(|(v, bound)| (v, Some(bound))),
            _ => landau::landau(m, args.n, &opts).map(|v| (v, None)),
        };
        match entry {
            Err(e) if matches!(args.method, MethodChoice::One(_)) => return Err(e.into()),
            Err(_) => code = EXIT_DOMAIN,
            Ok(_) => {}
        }
        rows.push((m, entry));
    }
    let body = if args.format.csv {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|(m, e)| match e {
                Ok((v, bound)) => vec![m.name().into(), num(*v), bound.map(num).unwrap_or_default(), String::new()],
                Err(e) => vec![m.name().into(), String::new(), String::new(), e.to_string()],
            })
            .collect();
        render_csv(&["method", "value", "bound", "error"], &rows)
    } else {
        let results: Vec<Value> = rows
            .iter()
            .map(|(m, e)| match e {
                Ok((v, Some(bound))) => json!({"method": m.name(), "value": num(*v), "bound": num(*bound)}),
                Ok((v, None)) => json!({"method": m.name(), "value": num(*v)}),
                Err(e) => json!({"method": m.name(), "error": e.to_string()}),
            })
            .collect();
        render_json(&json!({"n": args.n, "results": results}))
    };
    Ok(Output { body, code })
}

/// `x` as an exact rational when it is real with a short binary expansion.
fn dyadic(z: ComplexVal) -> Option<Rational> {
    let scaled = z.re * 1024.0;
    (z.im == 0.0 && scaled.fract() == 0.0 && scaled.abs() < 1e12).then(|| Rational::from_f64(z.re)).flatten()
}

fn coeffs_cmd(args: CoeffArgs) -> Result<Output, Failure> {
    let (a, b) = (args.a, args.b);
    let exact_ab = dyadic(a).zip(dyadic(b));
    let (table, exact): (CoefficientTable, Option<Vec<Rational>>) = match args.family {
        Family::Sigma => {
            let k = args.k.unwrap_or(6);
            let exact = exact_ab.map(|(qa, qb)| coeffs::sigma_coeffs_exact(&qa, &qb, k)).transpose()?;
            (coeffs::sigma_coeffs(a, b, k)?, exact)
        }
        Family::A => (coeffs::a_coeffs(a, b), exact_ab.map(|(qa, qb)| coeffs::a_coeffs_exact(&qa, &qb))),
        Family::C => (coeffs::c_coeffs(), None),
        Family::G => {
            let exact = match dyadic(ComplexVal::new(args.h, 0.0)) {
                Some(h) => Some((1..=3).map(|k| coeffs::g_poly_exact(k, &h)).collect::<crate::Result<_>>()?),
                None => None,
            };
            (coeffs::g_table(args.h)?, exact)
        }
        Family::Lambda => (coeffs::lambda_coeffs(a, b), None),
    };
    let exact = exact.or_else(|| table.exact().map(<[Rational]>::to_vec));
    let len = args.k.map_or(table.len(), |k| k.min(table.len()));
    let rows: Vec<(usize, ComplexVal, Option<String>)> = (1..=len)
        .map(|k| {
            let v = table.get(k).expect("index within table");
            (k, v, exact.as_ref().and_then(|e| e.get(k - 1)).map(|r| r.to_string()))
        })
        .collect();
    let family = table.kind.name();
    let body = if args.format.csv {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|(k, v, e)| vec![k.to_string(), num(v.re), num(v.im), e.clone().unwrap_or_default()])
            .collect();
        render_csv(&["k", "re", "im", "exact"], &rows)
    } else {
        let values: Vec<Value> = rows
            .iter()
            .map(|(k, v, e)| {
                let mut o = json!({"k": k, "re": num(v.re), "im": num(v.im)});
                if let Some(e) = e {
                    o["exact"] = json!(e);
                }
                o
            })
            .collect();
        render_json(&json!({"family": family, "values": values}))
    };
    Ok(Output::ok(body))
}

fn table1_cmd(args: Table1Args) -> Result<Output, Failure> {
    let digits = match args.digits {
        Some(d) => d,
        None => env_digits()?.max(table1::TABLE_DIGITS),
    };
    let cells = table1::compute(digits)?;
    let code = if cells.iter().all(|c| c.passes()) { EXIT_OK } else { EXIT_VERIFY };
    let label = |i: usize| table1::COLUMNS[i].label;
    let body = if args.format.csv {
        let rows: Vec<Vec<String>> = cells
            .iter()
            .map(|c| {
                vec![
                    label(c.column).into(),
                    c.k.to_string(),
                    num(c.computed),
                    num(c.printed),
                    num(c.rel_dev()),
                    c.passes().to_string(),
                ]
            })
            .collect();
        render_csv(&["column", "k", "computed", "printed", "rel_dev", "pass"], &rows)
    } else {
        let cells: Vec<Value> = cells
            .iter()
            .map(|c| {
                json!({
                    "column": label(c.column),
                    "k": c.k,
                    "computed": num(c.computed),
                    "printed": num(c.printed),
                    "rel_dev": num(c.rel_dev()),
                    "pass": c.passes(),
                })
            })
            .collect();
        render_json(&json!({"digits": digits, "cells": cells}))
    };
    Ok(Output { body, code })
}

fn verify_cmd(args: VerifyArgs) -> Result<Output, Failure> {
    let opts = VerifyOptions { seed: args.seed, cases: args.cases, digits: env_digits()? };
    let checks = verify::run_all(&opts);
    let passed = checks.iter().all(|c| c.passed);
    let body = if args.format.csv {
        let rows: Vec<Vec<String>> = checks
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    c.passed.to_string(),
                    c.cases.to_string(),
                    c.failures.to_string(),
                    num(c.worst),
                    c.detail.clone(),
                ]
            })
            .collect();
        render_csv(&["name", "passed", "cases", "failures", "worst", "detail"], &rows)
    } else {
        let checks: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "cases": c.cases,
                    "failures": c.failures,
                    "worst": num(c.worst),
                    "detail": c.detail,
                })
            })
            .collect();
        render_json(&json!({"seed": args.seed, "passed": passed, "checks": checks}))
    };
    Ok(Output { body, code: if passed { EXIT_OK } else { EXIT_VERIFY } })
}
