//! The bundled example problems and their expected results.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, multbound_check};
use crate::error::{Error, Result};
use crate::field::{PrimeField, Rationals};
use crate::ideals::{Ideal, Rng};
use crate::mult::{
    colength_at_point, local_model_multiplicity, multiplicity_along_linear, order_along, Center, LocalModel,
    MultiplicityQuery, DEFAULT_TRIALS,
};
use crate::oracle::{blowup_example, fiber_degree, macaulay_colength, segre_discrepancy_linear};
use crate::poly::Polynomial;
use crate::problem::ProblemFile;
use crate::vogel::{base_locus, map_degree, vogel_run, DEFAULT_SEED};

/// `(file name, contents)` of every bundled problem.
pub const PROBLEMS: &[(&str, &str)] = &[
    ("cubics-through-line.vog", include_str!("../problems/cubics-through-line.vog")),
    ("identity.vog", include_str!("../problems/identity.vog")),
    ("net-of-conics.vog", include_str!("../problems/net-of-conics.vog")),
    ("free-cubics.vog", include_str!("../problems/free-cubics.vog")),
    ("quadric-projection.vog", include_str!("../problems/quadric-projection.vog")),
    ("quadric-cone.vog", include_str!("../problems/quadric-cone.vog")),
    ("morse-g3-l2.vog", include_str!("../problems/morse-g3-l2.vog")),
    ("morse-g4-l4.vog", include_str!("../problems/morse-g4-l4.vog")),
    ("morse-g5-l3.vog", include_str!("../problems/morse-g5-l3.vog")),
    ("fermat-cubic.vog", include_str!("../problems/fermat-cubic.vog")),
    ("cusp-plane.vog", include_str!("../problems/cusp-plane.vog")),
    ("double-plane.vog", include_str!("../problems/double-plane.vog")),
    ("triple-point-g4.vog", include_str!("../problems/triple-point-g4.vog")),
    ("varley-g4.vog", include_str!("../problems/varley-g4.vog")),
    ("simple-curve-g5.vog", include_str!("../problems/simple-curve-g5.vog")),
];

pub fn problem(name: &str) -> Result<ProblemFile> {
    let text = PROBLEMS
        .iter()
        .find(|(n, _)| *n == name || n.trim_end_matches(".vog") == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::InvalidInput(format!("no bundled problem `{name}`")))?;
    ProblemFile::parse(text)
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn degree_case(name: &str, delta: u64, degree: u64, v: Option<&[u64]>) -> Result<String, String> {
    let file = problem(name).map_err(e2s)?;
    let p = file.vogel_problem(file.seed.unwrap_or(DEFAULT_SEED)).map_err(e2s)?;
    let r = map_degree(&p, Some(&PrimeField::default_prime())).map_err(e2s)?;
    ensure(r.delta == delta && r.degree == degree, || {
        format!("delta {} and degree {}, expected {delta} and {degree}", r.delta, r.degree)
    })?;
    if let Some(v) = v {
        ensure(r.v_degrees == v, || format!("v-degrees {:?}, expected {v:?}", r.v_degrees))?;
    }
    ensure(r.trace.check_bookkeeping(), || "residual bookkeeping failed".into())?;
    let fiber = fiber_degree(&p, &Rng::new(DEFAULT_SEED)).map_err(e2s)?;
    ensure(fiber == degree, || format!("fiber count {fiber}, expected {degree}"))?;
    Ok(format!(
        "degX L = {}, delta = {}, deg f = {}, v = {:?}, fiber = {fiber}",
        r.degree_x_l, r.delta, r.degree, r.v_degrees
    ))
}

/// `𝔢 ≥ m(m-1)^{n-dZ-1}` for the hypersurface underlying a query.
pub fn samuel_bound(d: &Polynomial<Rationals>, q: &MultiplicityQuery<Rationals>, e: u64) -> Result<(u64, u64)> {
    let n = q.nvars();
    let (iz, dz) = match &q.center {
        Center::Point(p) => {
            let gens = (0..n)
                .map(|i| &Polynomial::var(Rationals, n, i) - &Polynomial::constant(Rationals, n, p[i].clone()))
                .collect();
            (Ideal::new(Rationals, n, gens)?, 0)
        }
        Center::Linear(z) => (z.clone(), z.affine_dimension().max(0) as usize),
    };
    let m = u64::from(order_along(d, &iz)?);
    let bound = m * m.saturating_sub(1).pow((n - dz - 1) as u32);
    if e < bound {
        return Err(Error::Disagreement(format!("multiplicity {e} below the bound {bound}")));
    }
    Ok((m, bound))
}

fn multiplicity_case(name: &str, expected: u64) -> Result<String, String> {
    let file = problem(name).map_err(e2s)?;
    let q = file.multiplicity_query().map_err(e2s)?;
    let r = multiplicity_along_linear(&q, &Rng::new(file.seed.unwrap_or(DEFAULT_SEED)), DEFAULT_TRIALS).map_err(e2s)?;
    let e = r.finite().ok_or("infinite multiplicity")?;
    ensure(e == expected, || format!("e = {e}, expected {expected}"))?;
    let d = match (file.ideal.len(), file.system.first()) {
        (1, _) => file.ideal[0].clone(),
        (0, Some(theta)) => theta.clone(),
        _ => return Ok(format!("e = {e}")),
    };
    let (m, bound) = samuel_bound(&d, &q, e).map_err(e2s)?;
    Ok(format!("e = {e}, m = {m}, bound {bound}"))
}

fn morse_case(g: usize, ell: u32) -> Result<String, String> {
    let detail = multiplicity_case(&format!("morse-g{g}-l{ell}"), u64::from(ell))?;
    let rep = local_model_multiplicity(LocalModel::new(g, ell), &Rationals, Some(&Rng::new(DEFAULT_SEED))).map_err(e2s)?;
    ensure(rep.value == u64::from(ell), || "closed form disagrees".into())?;
    Ok(detail)
}

fn bound_case(name: &str, feasible: bool, lhs: i64, rhs: i64) -> Result<String, String> {
    let file = problem(name).map_err(e2s)?;
    let r = multbound_check(&file.singularity_profile().map_err(e2s)?, file.gauss_degree).map_err(e2s)?;
    ensure(r.feasible == feasible && r.lhs == lhs.into() && r.rhs == rhs.into(), || {
        format!("lhs {} rhs {} feasible {}", r.lhs, r.rhs, r.feasible)
    })?;
    Ok(format!("lhs = {}, rhs = {}, feasible = {}", r.lhs, r.rhs, r.feasible))
}

fn cone() -> Result<String, String> {
    let file = problem("quadric-cone").map_err(e2s)?;
    let p = file.vogel_problem(DEFAULT_SEED).map_err(e2s)?;
    match vogel_run(&p) {
        Err(Error::NonDominant { step: 2, .. }) => {}
        other => return Err(format!("expected non-dominance at step 2, got {other:?}")),
    }
    // the base locus is the reduced vertex: length 1 in the chart z = 1
    let ib = base_locus(&p).map_err(e2s)?;
    let chart = ib.with(Polynomial::parse(Rationals, &file.vars, "z - 1").map_err(e2s)?).map_err(e2s)?;
    let one = BigInt::from(1).into();
    let zero = num_rational::BigRational::from_integer(0.into());
    let len = colength_at_point(&chart, &[zero.clone(), zero.clone(), zero, one]).map_err(e2s)?;
    ensure(len.finite() == Some(1), || format!("base locus length {len}"))?;
    let detail = multiplicity_case("quadric-cone", 2)?;
    Ok(format!("non-dominant at step 2, base locus length 1, {detail}"))
}

fn fermat() -> Result<String, String> {
    let detail = multiplicity_case("fermat-cubic", 48)?;
    let file = problem("fermat-cubic").map_err(e2s)?;
    let mut gens: Vec<_> = file.system[1..].to_vec();
    gens.push(file.system[0].clone());
    let j = Ideal::new(Rationals, 5, gens).map_err(e2s)?;
    let origin = vec![num_rational::BigRational::from_integer(0.into()); 5];
    let a = j.colength().finite();
    let b = colength_at_point(&j, &origin).map_err(e2s)?.finite();
    let c = macaulay_colength(&j, 8).map_err(e2s)?.finite();
    ensure(a == Some(48) && b == Some(48) && c == Some(48), || format!("colengths {a:?} {b:?} {c:?}"))?;
    let g = file.profile.as_ref().map_or(5, |p| p.g);
    let gauss = bounds::factorial(g) - 48;
    ensure(gauss == BigInt::from(bounds::clemens_griffiths_degree()), || format!("{g}! - 48 = {gauss}"))?;
    Ok(format!("{detail}, deg G = {g}! - 48 = {gauss}"))
}

fn tables() -> Result<String, String> {
    ensure(bounds::max_isolated_points(5).map_err(e2s)? == 58.into(), || "isolated points".into())?;
    ensure(bounds::max_isolated_multiplicity(4).map_err(e2s)? == 2, || "isolated multiplicity".into())?;
    for g in 3..=8 {
        ensure(!bounds::smooth_in_codim1_check(g).map_err(e2s)?.feasible, || format!("codim 1 at g = {g}"))?;
    }
    let k5 = bounds::known_degrees(5).map_err(e2s)?;
    let row: Vec<i64> = [&k5.hyperelliptic, &k5.jacobian, &k5.smooth]
        .iter()
        .map(|b| b.to_i64().unwrap_or(-1))
        .chain(k5.cubic_threefold.map(|c| c as i64))
        .collect();
    ensure(row == [16, 70, 120, 72], || format!("known degrees {row:?}"))?;
    for k in 0..=10 {
        ensure(bounds::genus4_degree(k).map_err(e2s)? == 24 - 2 * u64::from(k), || format!("genus 4, k = {k}"))?;
    }
    for k in [0, 7, 8, 12] {
        let r = blowup_example(k).map_err(e2s)?;
        ensure(r.delta == 7 - i64::from(k) && r.degree == 20 && (r.delta < 0) == (k > 7), || {
            format!("blow-up k = {k}")
        })?;
    }
    let segre = segre_discrepancy_linear(3, 1, 3).map_err(e2s)?;
    ensure(segre == 7.into(), || format!("segre {segre}"))?;
    Ok("isolated 58, multiplicity 2, known degrees {16, 70, 120, 72}, blow-up and segre closed forms".into())
}

/// Named checks, in report order.
pub fn entries() -> Vec<(&'static str, Check)> {
    vec![
        ("cubics-through-line", || degree_case("cubics-through-line", 7, 20, Some(&[0, 3, 4]))),
        ("identity", || degree_case("identity", 0, 1, None)),
        ("net-of-conics", || degree_case("net-of-conics", 1, 3, None)),
        ("free-cubics", || degree_case("free-cubics", 0, 27, None)),
        ("quadric-projection", || degree_case("quadric-projection", 0, 2, None)),
        ("quadric-cone", cone),
        ("morse-g3-l2", || morse_case(3, 2)),
        ("morse-g4-l4", || morse_case(4, 4)),
        ("morse-g5-l3", || morse_case(5, 3)),
        ("fermat-cubic", fermat),
        ("cusp-plane", || multiplicity_case("cusp-plane", 3)),
        ("double-plane", || multiplicity_case("double-plane", 2)),
        ("triple-point-g4", || bound_case("triple-point-g4", false, 24, 20)),
        ("varley-g4", || bound_case("varley-g4", true, 20, 20)),
        ("simple-curve-g5", || bound_case("simple-curve-g5", true, 12, 116)),
        ("tables", tables),
    ]
}

/// Runs every check concurrently; results come back in [`entries`] order.
pub fn run_all() -> Vec<Outcome> {
    entries()
        .into_par_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let res = check();
            let millis = start.elapsed().as_millis();
            let (passed, detail) = match res {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Outcome {
                name: name.to_string(),
                passed,
                detail,
                millis,
            }
        })
        .collect()
}
