//! Acceptance run: one line per criterion, then a non-zero exit if any failed.
//!
//! Run with `cargo test -p itergcd-core --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use itergcd::heights::{canonical_height, special_probe, HeightMethod};
use itergcd::lab::{gcd_grid, gcd_iterates, linear_common_root, CellOutcome};
use itergcd::multiplicity::{direct_v, divisor_h, mult_of_factor, multiplicity_bound, CaseTag, Congruence};
use itergcd::poly::{int, iterate, rat};
use itergcd::{Error, NumberField, Poly, Rational};
use num_traits::{One, Zero};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config as RunnerConfig, TestError, TestRunner};

/// Pinned from an independent big-integer run of `h(f^n(1)) / 2^n` at n = 20 and 25.
const HEIGHT_X2_PLUS_1_AT_1: f64 = 0.407_354_522_739_48;
const HEIGHT_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn p(cs: &[i64]) -> Poly {
    Poly::from_ints(cs)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field_of(q: &Poly) -> NumberField {
    if q.deg() == 1 {
        NumberField::rational_point(&(-q.coeff(0) / q.coeff(1)))
    } else {
        NumberField::new(q).expect("irreducible factor")
    }
}

fn cubic_family() -> Outcome {
    let f = p(&[0, 0, 1, 1]);
    let g = p(&[0, 0, 5, 1]);
    let mut vs = Vec::new();
    for n in 1..=4 {
        let d = gcd_iterates(&f, &g, &Poly::zero(), n, n).map_err(|e| e.to_string())?;
        let v = mult_of_factor(&d, &Poly::x());
        ensure(v == 1 << n, || format!("n = {n}: v_0 = {v}, want {}", 1 << n))?;
        vs.push(v);
    }
    Ok(format!("v_0 = {vs:?}"))
}

fn doubling_family() -> Outcome {
    let f = p(&[0, 2]);
    let g = p(&[1, 1]);
    let c = p(&[0, 0, 1]);
    for n in 1..=6 {
        let k = 1usize << n;
        let m = k * (k - 1);
        let d = gcd_iterates(&f, &g, &c, n, m).map_err(|e| e.to_string())?;
        let root = Poly::linear_root(&int(k as i64));
        ensure(root.divides(&d), || format!("n = {n}: x - {k} does not divide {d}"))?;
    }
    Ok("x - 2^n divides every gcd, n = 1..6".into())
}

fn halving_family() -> Outcome {
    let f = Poly::new(vec![Rational::zero(), rat(1, 2)]);
    let g = p(&[1, 2]);
    let c = p(&[-1, -1]);
    for n in 1..=20u32 {
        let k = num_traits::pow(int(2), n as usize);
        let lam = -&k / (&k + Rational::one());
        let (mut fx, mut gx) = (lam.clone(), lam.clone());
        for _ in 0..n {
            fx = f.eval(&fx);
            gx = g.eval(&gx);
        }
        let target = c.eval(&lam);
        ensure(fx == target && gx == target, || format!("n = {n}: {fx}, {gx}, {target}"))?;
        let closed = linear_common_root(&rat(1, 2), &int(2), &int(1), Some(&c), n as usize)
            .map_err(|e| e.to_string())?;
        ensure(closed.as_ref() == Some(&lam), || format!("n = {n}: closed form {closed:?}"))?;
    }
    Ok("all 20 points agree".into())
}

fn linear_finiteness() -> Outcome {
    let rep = gcd_grid(&p(&[0, 2]), &p(&[1, 3]), &p(&[0, 0, 1]), 12, true);
    for cell in rep.cells.iter().filter(|c| c.n >= 2) {
        match &cell.outcome {
            CellOutcome::Ok { gcd, .. } => {
                ensure(gcd.is_one(), || format!("n = {}: gcd = {gcd}", cell.n))?
            }
            other => return Err(format!("n = {}: {other:?}", cell.n)),
        }
    }
    ensure(rep.stabilized, || "factor universe did not stabilize".into())?;
    Ok(format!(
        "gcd = 1 for n = 2..12, universe of {} factor(s)",
        rep.factor_universe.len()
    ))
}

fn divisor_instance() -> Outcome {
    let f = p(&[-2, 0, 1]);
    let g = p(&[-1, 0, 1]);
    let c = Poly::zero();
    let rep = divisor_h(&f, &g, &c, 4).map_err(|e| e.to_string())?;
    for m in 1..=4 {
        for n in 1..=4 {
            let d = gcd_iterates(&f, &g, &c, m, n).map_err(|e| e.to_string())?;
            ensure(d.divides(&rep.h), || format!("gcd at ({m}, {n}) = {d} does not divide h"))?;
        }
    }
    let mut checked = 0;
    for fc in &rep.factors {
        let q = match fc.against {
            itergcd::multiplicity::Against::F => &f,
            itergcd::multiplicity::Against::G => &g,
        };
        let cert = &fc.certificate;
        let field = field_of(&fc.factor);
        for n in 1..=8u64 {
            let v = match direct_v(q, &c, &field, n) {
                Ok(v) => v,
                Err(Error::Degenerate(_)) => continue,
                Err(e) => return Err(e.to_string()),
            };
            ensure(v <= cert.bound_m, || format!("{}: v({n}) = {v} > M = {}", fc.factor, cert.bound_m))?;
            let exceptional = cert.exceptional_ns.iter().any(|&(k, _)| k == n);
            ensure(v == 0 || cert.congruence.contains(n) || exceptional, || {
                format!("{}: v({n}) = {v} outside {:?}", fc.factor, cert.congruence)
            })?;
            checked += 1;
        }
    }
    Ok(format!("h = {}, {checked} direct checks", rep.h))
}

/// `v_λ(q^n - c)` by expanding the iterate, for the factor with root `λ`.
fn expanded_v(q: &Poly, c: &Poly, factor: &Poly, n: usize) -> usize {
    let big = &iterate(q, n).unwrap() - c;
    mult_of_factor(&big, factor)
}

fn agree_with_expansion(q: &Poly, c: &Poly, factor: &Poly) -> Result<usize, String> {
    let field = field_of(factor);
    let mut n = 1;
    while q.deg().pow(n as u32) <= 256 {
        let want = expanded_v(q, c, factor, n);
        let got = direct_v(q, c, &field, n as u64).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("q = {q}, n = {n}: direct {got}, expanded {want}"))?;
        n += 1;
    }
    Ok(n - 1)
}

fn certificate_suite() -> Outcome {
    let q = p(&[-2, 0, 1]);
    let at = |a: i64| NumberField::rational_point(&int(a));

    let cert = multiplicity_bound(&q, &p(&[2]), &at(-2)).map_err(|e| e.to_string())?;
    ensure(cert.case == CaseTag::ConstantC && cert.bound_m == 1, || format!("{cert:?}"))?;
    for n in 1..=6 {
        let v = direct_v(&q, &p(&[2]), &at(-2), n).map_err(|e| e.to_string())?;
        ensure(v == 1, || format!("constant c: v({n}) = {v}"))?;
    }
    let n1 = agree_with_expansion(&q, &p(&[2]), &p(&[2, 1]))?;

    let cubic = p(&[0, 0, 1, 1]);
    match multiplicity_bound(&cubic, &Poly::zero(), &at(0)) {
        Err(Error::HypothesisViolation(_)) => {}
        other => return Err(format!("ramified cycle: expected a hypothesis violation, got {other:?}")),
    }
    let n2 = agree_with_expansion(&cubic, &Poly::zero(), &Poly::x())?;

    let cert = multiplicity_bound(&q, &Poly::x(), &at(2)).map_err(|e| e.to_string())?;
    ensure(cert.bound_m == 1 && cert.exceptional_ns.is_empty(), || format!("{cert:?}"))?;
    ensure(!matches!(cert.congruence, Congruence::None), || "empty congruence".into())?;
    let n3 = agree_with_expansion(&q, &Poly::x(), &p(&[-2, 1]))?;

    Ok(format!("three cases, expansion agrees up to n = {n1}, {n2}, {n3}"))
}

fn heights() -> Outcome {
    let at = |a: i64| NumberField::rational_point(&int(a)).generator();
    let ln2 = std::f64::consts::LN_2;
    let h = canonical_height(&p(&[0, 0, 1]), &at(2), 30).map_err(|e| e.to_string())?;
    ensure((h.value - ln2).abs() <= HEIGHT_TOL, || format!("ĥ_x²(2) = {}", h.value))?;
    let h = canonical_height(&p(&[-2, 0, 1]), &at(2), 30).map_err(|e| e.to_string())?;
    ensure(h.value <= HEIGHT_TOL, || format!("ĥ_(x²-2)(2) = {}", h.value))?;
    let h = canonical_height(&p(&[1, 0, 1]), &at(1), 30).map_err(|e| e.to_string())?;
    ensure((h.value - 0.4074).abs() <= 1e-3, || format!("ĥ_(x²+1)(1) = {}", h.value))?;
    ensure((h.value - HEIGHT_X2_PLUS_1_AT_1).abs() <= HEIGHT_TOL, || {
        format!("ĥ_(x²+1)(1) = {}, pinned {HEIGHT_X2_PLUS_1_AT_1}", h.value)
    })?;
    let x1 = h.value;
    let rows = special_probe(&p(&[0, 0, 1]), &p(&[2]), 1..=8, 30).map_err(|e| e.to_string())?;
    for r in &rows {
        let want = ln2 / (1u64 << r.n) as f64;
        ensure(r.method == HeightMethod::PoweringMap, || format!("n = {}: {:?}", r.n, r.method))?;
        ensure((r.height - want).abs() <= HEIGHT_TOL, || format!("n = {}: {} vs {want}", r.n, r.height))?;
    }
    Ok(format!("ĥ_(x²+1)(1) = {x1:.14}, probe rows = {}", rows.len()))
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(RunnerConfig {
        cases: common::CASES,
        failure_persistence: None,
        ..RunnerConfig::default()
    });
    runner.run(&strategy, test).map_err(|e| match e {
        TestError::Fail(why, input) => format!("{name}: {why} at {input:?}"),
        TestError::Abort(why) => format!("{name}: aborted, {why}"),
    })
}

fn properties() -> Outcome {
    use common::*;
    run_property("gcd", (poly(0, 5), poly(0, 5), poly(0, 4)), |(a, b, h)| {
        gcd_routes_agree(&a, &b, &h)
    })?;
    run_property("factor", (int_poly(1, 4, 9), int_poly(1, 4, 9)), |(a, b)| {
        factor_reconstructs(&(&a * &b))
    })?;
    run_property("jets", (poly(1, 4), poly(1, 3), rational(), 1usize..8), |(f, g, a, k)| {
        jets_compose(&f, &g, &a, k)
    })?;
    run_property("iterate", (poly(2, 3), 0usize..3, 0usize..3), |(f, m, n)| {
        iterate_homomorphism(&f, m, n)
    })?;
    run_property("height", (int_poly(2, 3, 4), rational()), |(f, x)| {
        height_functorial(&f, &x, 12)
    })?;
    run_property(
        "valuation",
        (poly(0, 4), poly(0, 4), rational(), (0usize..4, 0usize..4)),
        |(p, q, a, e)| v_additive(&p, &q, &a, e),
    )?;
    Ok(format!("6 suites x {} cases", common::CASES))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("cubic family v_0 = 2^n", Duration::from_secs(60), cubic_family),
        ("x - 2^n divides the doubling gcds", Duration::from_secs(5), doubling_family),
        ("halving family common points", Duration::from_secs(1), halving_family),
        ("linear pair diagonal gcds trivial", Duration::from_secs(5), linear_finiteness),
        ("divisor h and certificate bounds", Duration::from_secs(120), divisor_instance),
        ("certificate cases", Duration::from_secs(60), certificate_suite),
        ("canonical heights", Duration::from_secs(10), heights),
        ("property suites", Duration::from_secs(120), properties),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took {took:.2?}, limit {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {status} {name} ({detail}, {took:.2?})", i + 1);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
