//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hypersum::table1::TABLE_DIGITS;
use hypersum::verify::{self, Check};

const SEED: u64 = 20240601;
const ORACLE_DIGITS: u32 = 40;

struct Outcome {
    passed: bool,
    summary: String,
}

fn from_checks(checks: &[Check], elapsed: Duration, budget: Option<Duration>) -> Outcome {
    let mut passed = checks.iter().all(|c| c.passed);
    let mut parts: Vec<String> =
        checks.iter().map(|c| format!("{} worst={:.3e} ({})", c.name, c.worst, c.detail)).collect();
    if let Some(budget) = budget {
        let in_time = elapsed <= budget;
        passed &= in_time;
        parts.push(format!("runtime {:.2}s (limit {}s)", elapsed.as_secs_f64(), budget.as_secs()));
    }
    Outcome { passed, summary: parts.join("; ") }
}

fn timed(f: impl FnOnce() -> Vec<Check>) -> (Vec<Check>, Duration) {
    let start = Instant::now();
    let checks = f();
    (checks, start.elapsed())
}

fn table1() -> Outcome {
    let (checks, t) = timed(|| vec![verify::table1_reproduction(TABLE_DIGITS)]);
    from_checks(&checks, t, Some(Duration::from_secs(10)))
}

fn oracle_equivalence() -> Outcome {
    let (checks, t) = timed(|| vec![verify::oracle_equivalence(SEED, 500, &[5, 20, 100], ORACLE_DIGITS, 1e-10)]);
    from_checks(&checks, t, Some(Duration::from_secs(60)))
}

fn landau_agreement() -> Outcome {
    let (checks, t) = timed(|| vec![verify::landau_agreement(&[1, 5, 10, 50, 100], 10, 1e-11)]);
    from_checks(&checks, t, None)
}

fn remainder_bound() -> Outcome {
    let (checks, t) = timed(|| vec![verify::remainder_scaling(&[(51, 5), (101, 8), (201, 10)], ORACLE_DIGITS)]);
    from_checks(&checks, t, None)
}

fn coefficient_golden() -> Outcome {
    let (checks, t) = timed(|| vec![verify::coefficient_golden(SEED)]);
    from_checks(&checks, t, None)
}

fn conjecture() -> Outcome {
    let (checks, t) = timed(|| vec![verify::conjecture(SEED, 50, &[3, 10, 50], ORACLE_DIGITS, 1e-10)]);
    from_checks(&checks, t, None)
}

fn asymptotic_orders() -> Outcome {
    let (checks, t) = timed(|| vec![verify::asymptotic_orders(ORACLE_DIGITS)]);
    from_checks(&checks, t, None)
}

fn kernel() -> Outcome {
    let (checks, t) = timed(|| {
        vec![
            verify::kernel_recurrence(SEED, 10_000),
            verify::kernel_conjugate(SEED + 1, 10_000),
            verify::digamma_at_one(),
        ]
    });
    from_checks(&checks, t, None)
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 table reproduction", table1),
        ("2 oracle equivalence", oracle_equivalence),
        ("3 landau agreement", landau_agreement),
        ("4 remainder bound", remainder_bound),
        ("5 coefficient golden values", coefficient_golden),
        ("6 degenerate-case formula", conjecture),
        ("7 asymptotic orders", asymptotic_orders),
        ("8 kernel properties", kernel),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", o.summary);
        failed += usize::from(!o.passed);
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
