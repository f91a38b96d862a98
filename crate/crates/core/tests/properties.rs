use hypersum::coeffs::{a_coeffs_exact, c_coeffs, g_poly, sigma_coeffs_exact, sigma_half_recurrence};
use hypersum::complexfn::{digamma, gamma, gamma_ratio, pochhammer};
use hypersum::engine::{eval_auto, eval_generic};
use hypersum::landau::{landau_ck, landau_direct, landau_theorem3, landau_watson};
use hypersum::oracle::{compare, oracle_eval, partial_sum_ref, OracleRequest};
use hypersum::params::{classify, seq_factors, ExcessKind, ParamSet};
use hypersum::verify::{pole_distance, random_params, rng};
use hypersum::{ComplexVal, Tolerance};
use proptest::prelude::*;
use rug::Rational;

fn strip_point() -> impl Strategy<Value = ComplexVal> {
    (-20.0..20.0f64, -20.0..20.0f64)
        .prop_map(|(x, y)| ComplexVal::new(x, y))
        .prop_filter("near a pole", |&z| pole_distance(z) >= 0.1 && pole_distance(z + 1.0) >= 0.1)
}

fn params() -> impl Strategy<Value = ParamSet> {
    any::<u64>().prop_map(|seed| random_params(&mut rng(seed)))
}

fn rel(x: ComplexVal, y: ComplexVal) -> f64 {
    (x - y).norm() / y.norm()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn gamma_recurrence(z in strip_point()) {
        let g1 = gamma(z + 1.0).unwrap();
        prop_assert!(rel(z * gamma(z).unwrap(), g1) <= 1e-12);
    }

    #[test]
    fn digamma_recurrence(z in strip_point()) {
        let p1 = digamma(z + 1.0).unwrap();
        let err = (p1 - digamma(z).unwrap() - z.inv()).norm();
        prop_assert!(err <= 1e-12 * (1.0 + p1.norm()));
    }

    #[test]
    fn conjugate_symmetry(z in strip_point()) {
        prop_assert_eq!(gamma(z.conj()).unwrap(), gamma(z).unwrap().conj());
        prop_assert_eq!(digamma(z.conj()).unwrap(), digamma(z).unwrap().conj());
    }

    #[test]
    fn pochhammer_splits(z in strip_point(), j in 0u64..40, k in 0u64..40) {
        let whole = pochhammer(z, j + k);
        let split = pochhammer(z, j) * pochhammer(z + j as f64, k);
        prop_assert!(rel(split, whole) <= 1e-13, "{} vs {}", split, whole);
    }

    #[test]
    fn classification_ignores_order(p in params()) {
        let ab = classify(p.a(), p.b(), p.c()).unwrap();
        let ba = classify(p.b(), p.a(), p.c()).unwrap();
        let swapped = |k: ExcessKind| match k {
            ExcessKind::DegenerateNegInteger { m, p, which } => {
                let which = match which {
                    hypersum::params::Which::A => hypersum::params::Which::B,
                    hypersum::params::Which::B => hypersum::params::Which::A,
                };
                ExcessKind::DegenerateNegInteger { m, p, which }
            }
            k => k,
        };
        prop_assert_eq!(ab.kind, swapped(ba.kind));
        prop_assert_eq!(&ab.warnings, &ba.warnings);
        prop_assert_eq!(classify(p.a(), p.b(), p.c()).unwrap(), ab);
    }

    #[test]
    fn lambda_tends_to_one(a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let Ok(p) = ParamSet::new(ComplexVal::new(a, 0.0), ComplexVal::new(b, 0.0), ComplexVal::new(7.5, 0.0))
        else { return Ok(()) };
        let n = 10_000;
        let lam = seq_factors(&p, n).unwrap().lambda_n;
        prop_assert!((lam - 1.0).norm() <= 10.0 * (a * b).abs() / n as f64 + 1e-15);
    }

    #[test]
    fn nemes_polynomials_are_symmetric(h in 0.0..1.5f64) {
        for k in 1..=3 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let d = g_poly(k, h).unwrap() - sign * g_poly(k, 1.5 - h).unwrap();
            prop_assert!(d.abs() <= 1e-15, "k={} h={} diff={}", k, h, d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_matches_oracle(z in strip_point()) {
        let g = oracle_eval(OracleRequest::Gamma(z), 50).unwrap();
        prop_assert!(compare(gamma(z).unwrap(), &g).rel_err <= 1e-13);
        let d = oracle_eval(OracleRequest::Digamma(z), 50).unwrap();
        prop_assert!(compare(digamma(z).unwrap(), &d).rel_err <= 1e-13);
    }

    #[test]
    fn first_partial_sum_is_one(p in params()) {
        let r = eval_auto(&p, 1, &Tolerance::default()).unwrap();
        // the expansions can cancel heavily at n = 1; the reported error covers it
        let err = (r.value - 1.0).norm();
        prop_assert!(err <= 1e-13f64.max(r.est_error), "{:?}: err {:e} est {:e}", p, err, r.est_error);
    }

    #[test]
    fn agrees_with_oracle(p in params(), n in prop::sample::select(vec![5u64, 20, 100])) {
        let v = eval_auto(&p, n, &Tolerance::default()).unwrap();
        let r = partial_sum_ref(&p, n, 40).unwrap();
        prop_assert!(compare(v.value, &r).rel_err <= 1e-10, "{:?} n={}", p, n);
    }

    #[test]
    fn error_estimate_covers_oracle_deviation(p in params(), n in prop::sample::select(vec![5u64, 20, 100])) {
        let v = eval_auto(&p, n, &Tolerance::default()).unwrap();
        let r = partial_sum_ref(&p, n, 30).unwrap();
        let e = compare(v.value, &r);
        prop_assert!(e.abs_err <= v.est_error, "{:?} n={}: {:e} > {:e}", p, n, e.abs_err, v.est_error);
    }

    #[test]
    fn successive_sums_differ_by_one_term(p in params(), n in 1u64..200) {
        let (a, b, c) = (p.a(), p.b(), p.c());
        let term = (0..n).fold(ComplexVal::new(1.0, 0.0), |t, j| {
            let j = j as f64;
            t * (a + j) * (b + j) / ((c + j) * (j + 1.0))
        });
        let tol = Tolerance::default();
        let x = eval_auto(&p, n, &tol).unwrap().value;
        let y = eval_auto(&p, n + 1, &tol).unwrap().value;
        let scale = term.norm().max(x.norm()).max(y.norm());
        prop_assert!((y - x - term).norm() <= 1e-10 * scale);
    }

    #[test]
    fn approaches_gauss_value(p in params()) {
        prop_assume!(p.s().re > 0.05 && p.classify().kind == ExcessKind::Generic);
        let (a, b, c) = (p.a(), p.b(), p.c());
        let g = gamma_ratio(&[c, p.s()], &[c - a, c - b]).unwrap();
        let tol = Tolerance::default();
        let e20 = (eval_generic(&p, 20, &tol).unwrap().value - g).norm();
        let e160 = (eval_generic(&p, 160, &tol).unwrap().value - g).norm();
        if e160 >= e20 {
            // small Re s with large Im s: the decay has not set in by n = 160
            let d = |n| (partial_sum_ref(&p, n, 40).unwrap().to_complex() - g).norm();
            prop_assert!(d(160) >= d(20), "{:?}: {:e} -> {:e}", p, e20, e160);
        }
    }

    #[test]
    fn integer_excess_is_continuous(a in -3.0..3.0f64, b in -3.0..3.0f64, sign in prop::bool::ANY) {
        let near = 1.0 + if sign { 1e-6 } else { -1e-6 };
        let make = |s: f64| ParamSet::new(ComplexVal::new(a, 0.0), ComplexVal::new(b, 0.0), ComplexVal::new(a + b + s, 0.0));
        let (Ok(p), Ok(q)) = (make(1.0), make(near)) else { return Ok(()) };
        prop_assume!([p.a(), p.b(), p.c(), q.c(), p.c() - p.a(), p.c() - p.b()].iter().all(|&z| pole_distance(z) >= 0.1));
        prop_assert_eq!(p.classify().kind, ExcessKind::PositiveInteger { m: 1 });
        prop_assert_eq!(q.classify().kind, ExcessKind::Generic);
        let tol = Tolerance::default();
        let x = eval_auto(&p, 20, &tol).unwrap().value;
        let y = eval_auto(&q, 20, &tol).unwrap().value;
        prop_assert!(rel(y, x) <= 1e-4);
    }
}

#[test]
fn landau_methods_agree() {
    let tol = Tolerance::default();
    for n in [1, 5, 10, 50, 100] {
        let d = landau_direct(n).unwrap();
        for (name, v) in [("watson", landau_watson(n, &tol).unwrap()), ("ck", landau_ck(n, &tol).unwrap())] {
            assert!((v / d - 1.0).abs() <= 1e-11, "n={n} {name}: {v} vs {d}");
        }
    }
    assert_eq!(landau_direct(0).unwrap(), 1.0);
    assert_eq!(landau_direct(1).unwrap(), 1.25);
}

#[test]
fn theorem3_agrees_where_defined() {
    for n in [50, 100] {
        let (v, _) = landau_theorem3(n, 10).unwrap();
        let d = landau_direct(n).unwrap();
        assert!((v / d - 1.0).abs() <= 1e-11, "n={n}: {v} vs {d}");
    }
    assert!(landau_theorem3(1, 10).is_err());
    assert!(landau_theorem3(5, 10).is_err());
}

#[test]
fn theorem3_error_within_bound() {
    for m in 1..=12u64 {
        for n in [2 * m + 1, 3 * m, 5 * m, 10 * m, 40 * m] {
            let (v, bound) = landau_theorem3(n - 1, m).unwrap();
            let d = landau_direct(n - 1).unwrap();
            // allow for roundoff in the two f64 evaluations
            assert!((v - d).abs() <= bound + 1e-14, "n={n} M={m}: {:e} > {bound:e}", (v - d).abs());
        }
    }
}

#[test]
fn landau_constants_increase() {
    let mut prev = landau_direct(0).unwrap();
    for n in 1..=2000 {
        let g = landau_direct(n).unwrap();
        assert!(g > prev, "G_{n} = {g} <= G_{} = {prev}", n - 1);
        prev = g;
    }
}

#[test]
fn landau_growth_is_logarithmic() {
    let offsets: Vec<f64> =
        (0..=10_000u64).step_by(97).map(|n| landau_direct(n).unwrap() - ((n + 1) as f64).ln() / std::f64::consts::PI).collect();
    let (lo, hi) = offsets.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    assert!(lo >= 1.0 && hi <= 1.1, "offsets in [{lo}, {hi}]");
}

#[test]
fn sigma_matches_recurrence() {
    let half = q(1, 2);
    assert_eq!(sigma_coeffs_exact(&half, &half, 10).unwrap(), sigma_half_recurrence(10));
    let golden = [q(3, 1), q(23, 6), q(43, 10), q(647, 140), q(6131, 1260), q(70171, 13860)];
    assert_eq!(sigma_half_recurrence(6), golden);
}

#[test]
fn log_coefficients_reduce_to_landau_ones() {
    let half = q(1, 2);
    let a = a_coeffs_exact(&half, &half);
    let c = c_coeffs();
    let c = c.exact().unwrap();
    for (k, (ak, ck)) in a.iter().zip(c).enumerate() {
        assert_eq!(*ak, -ck.clone(), "k={}", k + 1);
    }
}

#[test]
fn oracle_precision_doubling() {
    let requests = [
        OracleRequest::PartialSum {
            a: ComplexVal::new(1.0 / 3.0, 0.0),
            b: ComplexVal::new(2.0 / 3.0, 0.0),
            c: ComplexVal::new(1.0, 0.0),
            n: 40,
        },
        OracleRequest::PartialSum {
            a: ComplexVal::new(0.75, 1.0),
            b: ComplexVal::new(0.25, 1.0),
            c: ComplexVal::new(-2.0, 2.0),
            n: 100,
        },
        OracleRequest::Gamma(ComplexVal::new(-6.5, 2.0)),
        OracleRequest::Digamma(ComplexVal::new(-2.5, 1.5)),
        OracleRequest::Landau(200),
    ];
    for req in requests {
        for p in [30u32, 40, 50] {
            let lo = oracle_eval(req, p).unwrap();
            let hi = oracle_eval(req, 2 * p).unwrap();
            let diff = ((lo.value - hi.value.clone()).abs() / hi.value.abs()).to_f64();
            assert!(diff < 10f64.powi(-(p as i32 - 5)), "{req:?} at {p} digits: {diff:e}");
        }
    }
}
