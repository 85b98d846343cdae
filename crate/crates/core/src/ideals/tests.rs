use std::collections::BTreeMap;

use super::*;
use crate::testutil::{q, qs, random_poly, rng};

fn ideal(n: usize, gens: &[&str]) -> Ideal<Rationals> {
    Ideal::new(Rationals, n, qs(n, gens)).unwrap()
}

#[test]
fn sum_and_power() {
    let s = ideal(2, &["x1"]).sum(&ideal(2, &["x2"])).unwrap();
    assert!(s.equals(&ideal(2, &["x1", "x2"])));
    let p = Ideal::maximal(Rationals, 2).power(2).unwrap();
    assert!(p.equals(&ideal(2, &["x1^2", "x1*x2", "x2^2"])));
    assert!(Ideal::maximal(Rationals, 2).power(0).unwrap().is_unit());
}

#[test]
fn double_point_membership() {
    let theta = q(4, "x1^2+x2^2+x3^2+x4^4");
    let m = Ideal::maximal(Rationals, 4);
    assert!(m.power(2).unwrap().contains(&theta).unwrap());
    assert!(!m.power(3).unwrap().contains(&theta).unwrap());
}

#[test]
fn simple_quotients() {
    let a = ideal(2, &["x1^2"]).quotient(&ideal(2, &["x1"])).unwrap();
    assert!(a.equals(&ideal(2, &["x1"])));
    let b = ideal(2, &["x1*x2"]).quotient(&ideal(2, &["x2"])).unwrap();
    assert!(b.equals(&ideal(2, &["x1"])));
    // non-homogeneous divisor goes through the tag method
    let c = ideal(2, &["x1*(x2+1)"]).quotient(&ideal(2, &["x2+1"])).unwrap();
    assert!(c.equals(&ideal(2, &["x1"])));
    assert!(ideal(2, &["x1"]).quotient(&Ideal::zero(Rationals, 2)).unwrap().is_unit());
}

#[test]
fn cone_section_quotient() {
    // a plane section of the cone is a complete intersection: no embedded point
    let cone = ideal(3, &["x1^2+x2^2+x3^2", "3*x1 - 7*x2 + 2*x3"]);
    let m = Ideal::maximal(Rationals, 3);
    assert!(cone.quotient(&m).unwrap().equals(&cone));
    // s*m instead of s leaves an embedded point, which the quotient removes
    let s = q(3, "3*x1 - 7*x2 + 2*x3");
    let emb = ideal(3, &["x1^2+x2^2+x3^2"]).sum(&m.product(&Ideal::principal(s)).unwrap()).unwrap();
    let qt = emb.quotient(&m).unwrap();
    assert!(qt.contains_ideal(&emb).unwrap());
    assert!(!emb.contains_ideal(&qt).unwrap());
    assert!(qt.equals(&cone));
}

#[test]
fn saturation_examples() {
    let (s, k) = ideal(2, &["x1^2*x2"]).saturate(&ideal(2, &["x2"])).unwrap();
    assert!(s.equals(&ideal(2, &["x1^2"])));
    assert_eq!(k, 1);
    let i = ideal(3, &["x1*x2 - x3^2", "x1^3"]);
    let (s, k) = i.saturate(&Ideal::unit(Rationals, 3)).unwrap();
    assert!(s.equals(&i));
    assert_eq!(k, 0);
    // the irrelevant ideal removes an embedded point at the origin
    let j = ideal(3, &["x1^2", "x1*x2", "x1*x3"]);
    let (s, k) = j.saturate(&Ideal::maximal(Rationals, 3)).unwrap();
    assert!(s.equals(&ideal(3, &["x1"])));
    assert_eq!(k, 1);
    let cube = ideal(3, &["x1^3*x3", "x1^2*x2*x3", "x1*x2^2*x3", "x2^3*x3"]);
    let line = ideal(3, &["x1", "x2"]);
    let (s, k) = cube.saturate(&line).unwrap();
    assert!(s.equals(&ideal(3, &["x3"])));
    assert_eq!(k, 3);
    assert_eq!(cube.saturate_loop(&line).unwrap().1, 3);
}

#[test]
fn intersections() {
    let i = ideal(2, &["x1"]).intersect(&ideal(2, &["x2"])).unwrap();
    assert!(i.equals(&ideal(2, &["x1*x2"])));
    let j = ideal(2, &["x1^2", "x2"]).intersect(&ideal(2, &["x1", "x2^2"])).unwrap();
    assert!(j.equals(&ideal(2, &["x1^2", "x1*x2", "x2^2"])));
    assert!(ideal(2, &["x1"]).intersect(&Ideal::zero(Rationals, 2)).unwrap().is_zero());
}

#[test]
fn elimination_examples() {
    // x1 = x, x2 = y, x3 = z
    let tc = ideal(3, &["x2 - x1^2", "x3 - x1^3"]);
    assert!(tc.eliminate(&[1, 2]).unwrap().is_zero());
    // x1 = t
    let par = ideal(3, &["x2 - x1", "x3 - x1^2"]);
    let e = par.eliminate(&[0]).unwrap();
    assert!(e.equals(&ideal(3, &["x3 - x2^2"])));
    assert!(par.eliminate(&[5]).is_err());
}

#[test]
fn linear_colon_matches_tag_method() {
    let mut r = rng(21);
    let fp = PrimeField::new(32003).unwrap();
    for _ in 0..12 {
        let n = 4;
        let l = random_poly(&Rationals, &mut r, n, 1, 3, true);
        let g1 = random_poly(&Rationals, &mut r, n, 2, 4, true);
        let g2 = random_poly(&Rationals, &mut r, n, 2, 4, true);
        // force some l-torsion
        let i = Ideal::new(Rationals, n, vec![&l * &g1, &(&l * &l) * &g2, &g1 * &g2])
            .unwrap();
        let fast = i.quotient_by(&l).unwrap();
        let slow = i.quotient_by_tag(&l).unwrap();
        assert!(fast.equals(&slow));
        let (sf, kf) = i.saturate_by(&l).unwrap();
        let (ss, ks) = i.saturate_by_loop(&l).unwrap();
        assert!(sf.equals(&ss));
        assert_eq!(kf, ks);
        let ip = i.reduce_mod(&fp).unwrap();
        let lp = l.reduce_mod(&fp).unwrap();
        let (sp, kp) = ip.saturate_by(&lp).unwrap();
        assert_eq!(kp, kf);
        assert!(sp.equals(&sf.reduce_mod(&fp).unwrap()));
    }
}

#[test]
fn saturation_properties() {
    let mut r = rng(4);
    for _ in 0..6 {
        let n = 3;
        let gens: Vec<_> = (0..2).map(|_| random_poly(&Rationals, &mut r, n, 2, 3, true)).collect();
        let m = random_poly(&Rationals, &mut r, n, 1, 2, true);
        let i = Ideal::new(Rationals, n, gens.iter().map(|g| g * &m).collect()).unwrap();
        let j = Ideal::new(Rationals, n, vec![m.clone(), q(n, "x1")]).unwrap();
        assert!(i.quotient(&j).unwrap().contains_ideal(&i).unwrap());
        let (s, _) = i.saturate(&j).unwrap();
        assert!(s.saturate(&j).unwrap().0.equals(&s));
        assert!(s.quotient(&j).unwrap().equals(&s));
        let (l, kl) = i.saturate_loop(&j).unwrap();
        assert!(l.equals(&s));
        assert_eq!(i.saturate(&j).unwrap().1, kl);
    }
}

type Terms = BTreeMap<Vec<u16>, num_rational::BigRational>;

fn naive_terms(p: &Polynomial<Rationals>) -> Terms {
    p.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

fn naive_mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u16> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != num_rational::BigRational::default());
    out
}

#[test]
fn constructions_match_naive_expansion() {
    let mut r = rng(8);
    for _ in 0..10 {
        let n = 3;
        let a: Vec<_> = (0..2).map(|_| random_poly(&Rationals, &mut r, n, 2, 3, false)).collect();
        let b: Vec<_> = (0..2).map(|_| random_poly(&Rationals, &mut r, n, 2, 3, false)).collect();
        let ia = Ideal::new(Rationals, n, a.clone()).unwrap();
        let ib = Ideal::new(Rationals, n, b.clone()).unwrap();
        let mut expect: Vec<Terms> = Vec::new();
        for x in &a {
            for y in &b {
                expect.push(naive_mul(&naive_terms(x), &naive_terms(y)));
            }
        }
        let got: Vec<Terms> = ia.product(&ib).unwrap().generators().iter().map(naive_terms).collect();
        for e in &expect {
            assert!(got.contains(e));
        }
        let sq: Vec<Terms> = ia.power(2).unwrap().generators().iter().map(naive_terms).collect();
        assert!(sq.contains(&naive_mul(&naive_terms(&a[0]), &naive_terms(&a[1]))));
        let s = ia.sum(&ib).unwrap();
        assert_eq!(s.generators().len(), 4);
    }
}

/// All points of `F_p^n`.
fn points(p: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (0..p).map(move |a| [v.clone(), vec![a]].concat()))
            .collect();
    }
    out
}

#[test]
fn radical_membership_against_point_search() {
    // with x^p - x in the ideal every point of V(I) is F_p-rational
    let fp = PrimeField::new(5).unwrap();
    let mut r = rng(13);
    let n = 2;
    let frob: Vec<_> = (0..n)
        .map(|i| {
            let x = Polynomial::var(fp, n, i);
            &x.pow(5) - &x
        })
        .collect();
    let mut seen = [0, 0];
    let mut case = 0;
    while case < 10 {
        let g = random_poly(&fp, &mut r, n, 2, 3, false);
        let f = random_poly(&fp, &mut r, n, 2, 2, false);
        let f = if case % 2 == 0 { &f * &g } else { f };
        let mut gens = frob.clone();
        gens.push(g.clone());
        let i = Ideal::new(fp, n, gens).unwrap();
        let expected = points(5, n)
            .iter()
            .filter(|pt| fp.is_zero(&g.evaluate(pt)))
            .all(|pt| fp.is_zero(&f.evaluate(pt)));
        assert_eq!(i.radical_contains(&f).unwrap(), expected);
        seen[usize::from(expected)] += 1;
        case += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn cache_is_shared_and_consistent() {
    let i = ideal(3, &["x1^2 - x2*x3", "x2^3 - x1*x3^2"]);
    let bases: Vec<_> = std::thread::scope(|s| {
        let hs: Vec<_> = (0..4).map(|_| s.spawn(|| i.gb())).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for b in &bases {
        assert_eq!(b.generators(), bases[0].generators());
    }
    let c = i.clone();
    assert!(Arc::ptr_eq(&c.gb(), &i.gb()));
    let from = Ideal::from_basis((*i.groebner(MonomialOrder::Lex)).clone());
    assert!(from.equals(&i));
}

#[test]
fn ring_mismatch_is_reported() {
    let a = ideal(2, &["x1"]);
    let b = ideal(3, &["x1"]);
    assert!(matches!(a.sum(&b), Err(Error::RingMismatch(_))));
    assert!(matches!(a.quotient(&b), Err(Error::RingMismatch(_))));
    assert!(matches!(a.contains(&q(3, "x1")), Err(Error::RingMismatch(_))));
}
