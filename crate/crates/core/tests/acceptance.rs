//! End-to-end acceptance run. Every criterion prints one PASS or FAIL line with
//! its wall time; the test fails if any criterion fails or misses its budget.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use vcycle::bounds::{self, multbound_check, Component, SingularityProfile};
use vcycle::corpus::{self, samuel_bound};
use vcycle::mult::{
    colength_at_point, local_model_multiplicity, multiplicity_along_linear, samuel_multiplicity, Center, LocalModel,
    MultiplicityQuery, DEFAULT_TRIALS,
};
use vcycle::oracle::{blowup_example, fiber_degree, macaulay_colength, segre_discrepancy_linear};
use vcycle::vogel::{base_locus, map_degree, vogel_run, DEFAULT_SEED};
use vcycle::{Colength, Error, Ideal, Monomial, Polynomial, PrimeField, Rationals, Rng, VarNames};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn zero(n: usize) -> Vec<BigRational> {
    vec![BigRational::from_integer(0.into()); n]
}

fn cubics() -> Outcome {
    let file = corpus::problem("cubics-through-line").map_err(e2s)?;
    let fp = PrimeField::default_prime();
    let mut seen = Vec::new();
    for seed in [DEFAULT_SEED, 1, 2] {
        let r = map_degree(&file.vogel_problem(seed).map_err(e2s)?, Some(&fp)).map_err(e2s)?;
        ensure(r.verification.modular_delta == Some(r.delta), "modular run disagrees")?;
        ensure(r.trace.check_bookkeeping(), "residual bookkeeping")?;
        seen.push((r.delta, r.degree, r.v_degrees.clone(), r.residual_points));
    }
    ensure(seen.iter().all(|s| *s == seen[0]), format!("seeds disagree: {seen:?}"))?;
    let (delta, degree, v, residual) = seen[0].clone();
    ensure(delta == 7 && degree == 20 && v == [0, 3, 4] && residual == 20, format!("{:?}", seen[0]))?;
    Ok(format!("delta = {delta}, deg f = {degree}, v = {v:?}, residual {residual}"))
}

fn segre() -> Outcome {
    let s = segre_discrepancy_linear(3, 1, 3).map_err(e2s)?;
    let file = corpus::problem("cubics-through-line").map_err(e2s)?;
    let t = vogel_run(&file.vogel_problem(DEFAULT_SEED).map_err(e2s)?).map_err(e2s)?;
    ensure(s == 7.into() && s == BigInt::from(t.discrepancy()), format!("segre {s}, vogel {}", t.discrepancy()))?;
    Ok(format!("segre = vogel delta = {s}"))
}

fn blowup() -> Outcome {
    for k in [0, 7, 8, 12] {
        let r = blowup_example(k).map_err(e2s)?;
        ensure(r.delta == 7 - i64::from(k) && r.degree == 20, format!("k = {k}: {r:?}"))?;
    }
    for k in 0..=12 {
        ensure((blowup_example(k).map_err(e2s)?.delta < 0) == (k > 7), format!("sign at k = {k}"))?;
    }
    Ok("delta = 7 - k, deg f = 20, negative exactly for k > 7".into())
}

fn cone() -> Outcome {
    let file = corpus::problem("quadric-cone").map_err(e2s)?;
    let p = file.vogel_problem(DEFAULT_SEED).map_err(e2s)?;
    // base locus in the chart z = 1 is the reduced vertex
    let vars = &file.vars;
    let chart = base_locus(&p)
        .map_err(e2s)?
        .with(Polynomial::parse(Rationals, vars, "z - 1").map_err(e2s)?)
        .map_err(e2s)?;
    let mut vertex = zero(4);
    vertex[3] = BigRational::from_integer(1.into());
    let len = colength_at_point(&chart, &vertex).map_err(e2s)?;
    ensure(len == Colength::Finite(1), format!("base locus length {len}"))?;
    // the cone itself at the vertex, in the same chart
    let v3 = VarNames::new(["x", "y", "w"]);
    let parse = |s: &str| Polynomial::parse(Rationals, &v3, s).map_err(e2s);
    let x = Ideal::new(Rationals, 3, vec![parse("x^2 + y^2 + w^2")?]).map_err(e2s)?;
    let q = MultiplicityQuery::new(x, vec![parse("x")?, parse("y")?, parse("w")?], Center::Point(zero(3)), 2)
        .map_err(e2s)?;
    let e = samuel_multiplicity(&q, &Rng::new(DEFAULT_SEED), DEFAULT_TRIALS).map_err(e2s)?;
    ensure(e.finite() == Some(2), format!("multiplicity {:?}", e.value))?;
    let along = multiplicity_along_linear(&file.multiplicity_query().map_err(e2s)?, &Rng::new(DEFAULT_SEED), 3)
        .map_err(e2s)?;
    ensure(along.finite() == Some(2), "multiplicity along the vertex line")?;
    match vogel_run(&p) {
        Err(Error::NonDominant { step: 2, .. }) => {}
        other => return Err(format!("expected non-dominance at step 2, got {:?}", other.map(|t| t.discrepancy()))),
    }
    Ok("base locus length 1, e = 2, non-dominant at step 2".into())
}

fn local_models() -> Outcome {
    let mut out = Vec::new();
    for (g, ell) in [(3, 2), (4, 4), (5, 3)] {
        let r = local_model_multiplicity(LocalModel::new(g, ell), &Rationals, Some(&Rng::new(DEFAULT_SEED)))
            .map_err(e2s)?;
        ensure(r.value == u64::from(ell), format!("({g}, {ell}) gives {}", r.value))?;
        ensure(r.verification.is_some(), "no symbolic verification recorded")?;
        out.push(format!("({g},{ell}) -> {}", r.value));
    }
    let d = bounds::genus4_degree(2).map_err(e2s)?;
    ensure(d == 20, format!("genus 4 with two thetanulls: {d}"))?;
    Ok(format!("{}; genus 4 degree 24 - 4 = {d}", out.join(", ")))
}

fn fermat() -> Outcome {
    let file = corpus::problem("fermat-cubic").map_err(e2s)?;
    let mut gens = file.system[1..].to_vec();
    gens.push(file.system[0].clone());
    let j = Ideal::new(Rationals, 5, gens).map_err(e2s)?;
    let a = j.colength();
    let b = colength_at_point(&j, &zero(5)).map_err(e2s)?;
    let c = macaulay_colength(&j, 8).map_err(e2s)?;
    ensure([a, b, c].iter().all(|x| *x == Colength::Finite(48)), format!("{a} {b} {c}"))?;
    let deg = bounds::factorial(5) - 48;
    ensure(deg == BigInt::from(bounds::clemens_griffiths_degree()), format!("120 - 48 = {deg}"))?;
    Ok(format!("colength 48 three ways, deg G = {deg}"))
}

fn bounds_suite() -> Outcome {
    ensure(bounds::max_isolated_points(5).map_err(e2s)? == 58.into(), "max isolated points")?;
    ensure(bounds::max_isolated_multiplicity(4).map_err(e2s)? == 2, "max isolated multiplicity")?;
    let triple = SingularityProfile::new(4, vec![Component::new(0, 3, 1)]).map_err(e2s)?;
    let r = multbound_check(&triple, None).map_err(e2s)?;
    ensure(!r.feasible && r.lhs == 24.into() && r.rhs == 20.into(), format!("{r}"))?;
    for g in 3..=8 {
        ensure(!bounds::smooth_in_codim1_check(g).map_err(e2s)?.feasible, format!("codim 1, g = {g}"))?;
    }
    let k = bounds::known_degrees(5).map_err(e2s)?;
    let mut vals: Vec<BigInt> = k.indecomposable().into_iter().map(|(_, d)| d).collect();
    vals.sort();
    ensure(vals == [16, 70, 72, 120].map(BigInt::from), format!("known degrees {vals:?}"))?;
    for n in 0..=10 {
        ensure(bounds::genus4_degree(n).map_err(e2s)? == 24 - 2 * u64::from(n), format!("genus 4, k = {n}"))?;
    }
    Ok("58, 2, 24 > 20, codim 1 excluded for g = 3..8, {16, 70, 120, 72}, 24 - 2k".into())
}

/// Ideals supported only at the origin: forms without constant term plus `𝔪^k`.
fn origin_ideal() -> impl Strategy<Value = Ideal<Rationals>> {
    (2usize..=4, 2usize..=3).prop_flat_map(|(n, k)| {
        let term = (proptest::collection::vec(0u16..=3, n), -5i64..=5)
            .prop_filter("degree 1..=3", |(e, _)| (1..=3).contains(&e.iter().sum::<u16>()));
        let poly = proptest::collection::vec(term, 1..=4);
        proptest::collection::vec(poly, 1..=3).prop_map(move |polys| {
            let mut gens: Vec<_> = polys
                .into_iter()
                .map(|terms| {
                    terms.into_iter().fold(Polynomial::zero(Rationals, n), |acc, (e, c)| {
                        let m = Polynomial::monomial(Rationals, n, Monomial::from_exponents(&e), BigRational::from_integer(c.into()));
                        &acc + &m
                    })
                })
                .filter(|p| !p.is_zero())
                .collect();
            let mk = Ideal::maximal(Rationals, n).power(k as u32).unwrap();
            gens.extend(mk.generators().iter().cloned());
            Ideal::new(Rationals, n, gens).unwrap()
        })
    })
}

fn oracles() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 20, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner
        .run(&origin_ideal(), |j| {
            let mac = macaulay_colength(&j, 6).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(mac, j.colength());
            Ok(())
        })
        .map_err(|e| format!("macaulay vs groebner: {e}"))?;

    let rng = Rng::new(DEFAULT_SEED);
    for (name, expected) in [("cubics-through-line", 20), ("identity", 1), ("net-of-conics", 3)] {
        let p = corpus::problem(name).and_then(|f| f.vogel_problem(DEFAULT_SEED)).map_err(e2s)?;
        let fiber = fiber_degree(&p, &rng).map_err(e2s)?;
        let deg = map_degree(&p, None).map_err(e2s)?.degree;
        ensure(fiber == expected && deg == expected, format!("{name}: fiber {fiber}, map degree {deg}"))?;
    }

    let mut pairs = 0;
    for name in ["quadric-cone", "morse-g3-l2", "morse-g4-l4", "morse-g5-l3", "fermat-cubic", "cusp-plane", "double-plane"] {
        let file = corpus::problem(name).map_err(e2s)?;
        let q = file.multiplicity_query().map_err(e2s)?;
        let e = multiplicity_along_linear(&q, &rng, DEFAULT_TRIALS).map_err(e2s)?.finite().ok_or("infinite")?;
        let d = if file.ideal.len() == 1 { &file.ideal[0] } else { &file.system[0] };
        samuel_bound(d, &q, e).map_err(|err| format!("{name}: {err}"))?;
        pairs += 1;
    }

    let mut steps = 0;
    for name in ["cubics-through-line", "identity", "net-of-conics", "free-cubics", "quadric-projection"] {
        let t = corpus::problem(name)
            .and_then(|f| f.vogel_problem(DEFAULT_SEED))
            .and_then(|p| vogel_run(&p))
            .map_err(e2s)?;
        ensure(t.check_bookkeeping(), format!("{name}: residual bookkeeping"))?;
        steps += t.steps.len();
    }

    let outcomes = corpus::run_all();
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
    ensure(failed.is_empty(), format!("corpus failures: {failed:?}"))?;
    Ok(format!(
        "20 random ideals, 3 fiber counts, {pairs} multiplicity bounds, {steps} residual steps, {} corpus entries",
        outcomes.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 8] = [
        ("1 cubics through a line", cubics, Some(10)),
        ("2 segre cross-check", segre, None),
        ("3 negative discrepancy", blowup, None),
        ("4 quadric cone", cone, Some(5)),
        ("5 local models", local_models, None),
        ("6 cubic threefold", fermat, Some(30)),
        ("7 bounds tables", bounds_suite, None),
        ("8 oracle equivalence", oracles, Some(120)),
    ];
    let mut failures = Vec::new();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let res = check();
        let took = start.elapsed();
        let res = match (res, budget) {
            (Ok(_), Some(b)) if took > Duration::from_secs(b) => Err(format!("took {took:.2?}, budget {b} s")),
            (r, _) => r,
        };
        match res {
            Ok(detail) => println!("PASS {name} ({took:.2?}): {detail}"),
            Err(why) => {
                println!("FAIL {name} ({took:.2?}): {why}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
