use super::*;
use crate::testutil::{q, qs};

fn rational_problem(n: usize, variety: &[&str], system: &[&str]) -> VogelProblem<Rationals> {
    let x = Ideal::new(Rationals, n, qs(n, variety)).unwrap();
    VogelProblem::new(x, qs(n, system), DEFAULT_SEED).unwrap()
}

/// Four cubics `x·A + y·B` containing the line `x = y = 0` in `P^3`.
fn cubics_through_line() -> VogelProblem<Rationals> {
    rational_problem(
        4,
        &[],
        &[
            "x1*(x1^2 - 2*x2*x3 + 3*x3^2 + x3*x4 - 5*x4^2) + x2*(2*x1*x4 + x3^2 - 4*x3*x4 + 7*x4^2)",
            "x1*(3*x2^2 + x1*x3 - x3*x4 + 2*x4^2) + x2*(x1^2 - 3*x3^2 + 5*x3*x4 + x4^2)",
            "x1*(x2*x4 - 6*x3^2 + 2*x3*x4 + x4^2) + x2*(4*x2*x3 + 2*x3^2 - x3*x4 - 3*x4^2)",
            "x1*(x1*x2 + 5*x3^2 - 7*x3*x4 + 2*x4^2) + x2*(x2^2 + x3^2 + 6*x3*x4 - 2*x4^2)",
        ],
    )
}

#[test]
fn base_locus_examples() {
    let free = rational_problem(3, &[], &["x1", "x2", "x3"]);
    assert!(base_locus(&free).unwrap().is_unit());
    let line = base_locus(&cubics_through_line()).unwrap();
    assert!(line.equals(&Ideal::new(Rationals, 4, qs(4, &["x1", "x2"])).unwrap()));
    let cone = rational_problem(4, &["x1^2+x2^2+x3^2"], &["x1", "x2", "x3"]);
    let vertex = base_locus(&cone).unwrap();
    assert!(vertex.equals(&Ideal::new(Rationals, 4, qs(4, &["x1", "x2", "x3"])).unwrap()));
    let inside = rational_problem(3, &["x1"], &["x1*x2", "x1*x3"]);
    assert_eq!(base_locus(&inside).unwrap_err(), Error::BaseLocusEverything);
}

#[test]
fn cubics_through_a_line() {
    let p = cubics_through_line();
    let t = vogel_run(&p).unwrap();
    assert_eq!(t.degree_x_l, 27);
    assert_eq!(t.v_degrees(), vec![0, 3, 4]);
    assert_eq!(t.discrepancy(), 7);
    assert_eq!(t.residual_points(), 20);
    assert!(t.check_bookkeeping());
    // the second residual is a curve of degree 8 and genus 7
    let c = t.steps[1].residual.hilbert().unwrap();
    assert_eq!((c.dimension, c.degree), (1, 8));
    assert_eq!(c.arithmetic_genus(), Some(7.into()));
}

#[test]
fn map_degree_of_cubics_through_a_line() {
    let r = map_degree(&cubics_through_line(), Some(&PrimeField::default_prime())).unwrap();
    assert_eq!((r.degree_x_l, r.delta, r.degree, r.residual_points), (27, 7, 20, 20));
    assert_eq!(r.verification.modular_delta, Some(7));
    assert_eq!(r.verification.second_delta, 7);
}

#[test]
fn free_systems_have_no_discrepancy() {
    let lines = rational_problem(3, &[], &["x1 + 2*x2 - x3", "3*x1 - x2 + x3", "x1 + x2 + 5*x3"]);
    let r = map_degree(&lines, None).unwrap();
    assert_eq!((r.delta, r.degree), (0, 1));
    let cubics = rational_problem(
        4,
        &[],
        &["x1^3 - x2*x3*x4", "x2^3 + 2*x1*x3*x4", "x3^3 - x1*x2*x4", "x4^3 + x1*x2*x3"],
    );
    assert!(base_locus(&cubics).unwrap().is_unit());
    let r = map_degree(&cubics, None).unwrap();
    assert_eq!((r.delta, r.degree), (0, 27));
}

#[test]
fn net_of_conics_through_a_point() {
    // conics through (0:0:1)
    let p = rational_problem(
        3,
        &[],
        &["x1^2 + 2*x1*x3 - x2*x3", "x2^2 - x1*x2 + 3*x2*x3 + x1*x3", "x1*x2 + x1*x3 + 4*x2*x3"],
    );
    let r = map_degree(&p, Some(&PrimeField::default_prime())).unwrap();
    assert_eq!((r.degree_x_l, r.delta, r.degree), (4, 1, 3));
}

#[test]
fn cone_is_not_dominant() {
    let cone = rational_problem(4, &["x1^2+x2^2+x3^2"], &["x1", "x2", "x3"]);
    assert_eq!(vogel_run(&cone).unwrap_err(), Error::NonDominant { step: 2, steps: 2 });
}

#[test]
fn seeds_agree() {
    let p = cubics_through_line();
    for seed in [1, 2, 99] {
        let t = vogel_run(&p.with_seed(seed)).unwrap();
        assert_eq!(t.v_degrees(), vec![0, 3, 4]);
    }
}

#[test]
fn invalid_problems() {
    let x = Ideal::zero(Rationals, 3);
    assert!(VogelProblem::new(x.clone(), qs(3, &["x1", "x2^2"]), 0).is_err());
    assert!(VogelProblem::new(x.clone(), vec![], 0).is_err());
    assert!(VogelProblem::new(x, vec![q(3, "x1 + 1")], 0).is_err());
    let bad = Ideal::new(Rationals, 3, qs(3, &["x1 + 1"])).unwrap();
    assert_eq!(VogelProblem::new(bad, qs(3, &["x1"]), 0).unwrap_err(), Error::NonHomogeneous);
}
