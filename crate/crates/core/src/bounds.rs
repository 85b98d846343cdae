//! Closed-form bounds on theta-divisor singularities and Gauss-map degrees.
//!
//! Everything here is exact integer arithmetic; `g!` outgrows machine words
//! quickly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn ser_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(i) => s.serialize_i64(i),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Optional structure on a component that raises the lower bound for its degree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ComponentFlags {
    /// Ambient ppav is simple and not a Jacobian: `deg ≥ g + 1`.
    pub simple_non_jacobian: bool,
    /// Class is a multiple of the minimal class: `deg ≥ g!/(g-d)!`.
    pub minimal_class: bool,
}

/// An irreducible component of `Sing Θ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub dim: usize,
    pub mult: u32,
    #[serde(serialize_with = "ser_big")]
    pub degree: BigInt,
    pub flags: ComponentFlags,
}

impl Component {
    pub fn new(dim: usize, mult: u32, degree: impl Into<BigInt>) -> Self {
        Component {
            dim,
            mult,
            degree: degree.into(),
            flags: ComponentFlags::default(),
        }
    }

    pub fn flagged(mut self, flags: ComponentFlags) -> Self {
        self.flags = flags;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityProfile {
    pub g: usize,
    pub components: Vec<Component>,
}

impl SingularityProfile {
    pub fn new(g: usize, components: Vec<Component>) -> Result<Self> {
        if g < 1 {
            return Err(Error::InvalidInput("dimension g must be positive".into()));
        }
        for c in &components {
            if c.dim >= g {
                return Err(Error::InvalidInput(format!("component dimension {} not below g = {g}", c.dim)));
            }
            if c.mult < 2 {
                return Err(Error::InvalidInput(format!("multiplicity {} of a singular component", c.mult)));
            }
            if c.degree < BigInt::one() {
                return Err(Error::InvalidInput("component degree must be at least 1".into()));
            }
        }
        Ok(SingularityProfile { g, components })
    }

    pub fn smooth(g: usize) -> Self {
        SingularityProfile { g, components: Vec::new() }
    }
}

/// Which lower bound for `deg_V Θ` was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Main,
    Ran,
    Hodge,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Main => "main",
            Rule::Ran => "ran",
            Rule::Hodge => "hodge",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub dim: usize,
    pub mult: u32,
    #[serde(serialize_with = "ser_big")]
    pub degree_bound: BigInt,
    pub rule: Rule,
    #[serde(serialize_with = "ser_big")]
    pub value: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub g: usize,
    #[serde(serialize_with = "ser_big")]
    pub lhs: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub rhs: BigInt,
    pub feasible: bool,
    /// `g! - lhs`: the largest Gauss-map degree the profile allows.
    #[serde(serialize_with = "ser_big")]
    pub implied_max_degree: BigInt,
    /// Strongest rule used by any component.
    pub rule: Rule,
    pub terms: Vec<Term>,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "g = {}", self.g)?;
        writeln!(f, "{:>4} {:>5} {:>12} {:>6} {:>14}", "dim", "mult", "deg bound", "rule", "term")?;
        for t in &self.terms {
            writeln!(
                f,
                "{:>4} {:>5} {:>12} {:>6} {:>14}",
                t.dim, t.mult, t.degree_bound, t.rule, t.value
            )?;
        }
        let rel = if self.feasible { "<=" } else { ">" };
        writeln!(f, "lhs {} {rel} rhs {}", self.lhs, self.rhs)?;
        writeln!(f, "feasible: {}", self.feasible)?;
        write!(f, "implied max deg G: {}", self.implied_max_degree)
    }
}

/// Tests `Σ m_i (m_i - 1)^{g-d_i-1} deg_i ≤ g! - deg G`, with `deg G = 4` when
/// not given. Flagged components use the larger of their degree and the
/// flag's lower bound.
pub fn multbound_check(p: &SingularityProfile, deg_gauss: Option<u64>) -> Result<BoundReport> {
    let g = p.g;
    let gf = factorial(g);
    let deg_g = BigInt::from(deg_gauss.unwrap_or(4));
    if let Some(d) = deg_gauss {
        if d % 2 != 0 || d < 4 {
            return Err(Error::InvalidInput(format!("Gauss degree {d} must be even and at least 4")));
        }
        if deg_g > gf {
            return Err(Error::InvalidInput(format!("Gauss degree {d} exceeds {g}! = {gf}")));
        }
    }
    let mut lhs = BigInt::zero();
    let mut terms = Vec::with_capacity(p.components.len());
    let mut strongest = Rule::Main;
    for c in &p.components {
        let mut bound = c.degree.clone();
        let mut rule = Rule::Main;
        if c.flags.simple_non_jacobian {
            let ran = BigInt::from(g + 1);
            if ran > bound {
                bound = ran;
                rule = Rule::Ran;
            }
        }
        if c.flags.minimal_class {
            let hodge = &gf / factorial(g - c.dim);
            if hodge > bound {
                bound = hodge;
                rule = Rule::Hodge;
            }
        }
        let m = BigInt::from(c.mult);
        let value = &m * num_traits::pow(&m - 1u32, g - c.dim - 1) * &bound;
        lhs += &value;
        strongest = match (strongest, rule) {
            (Rule::Hodge, _) | (_, Rule::Hodge) => Rule::Hodge,
            (Rule::Ran, _) | (_, Rule::Ran) => Rule::Ran,
            _ => Rule::Main,
        };
        terms.push(Term {
            dim: c.dim,
            mult: c.mult,
            degree_bound: bound,
            rule,
            value,
        });
    }
    let rhs = &gf - &deg_g;
    Ok(BoundReport {
        g,
        feasible: lhs <= rhs,
        implied_max_degree: &gf - &lhs,
        lhs,
        rhs,
        rule: strongest,
        terms,
    })
}

/// A double component of codimension one in `Θ` whose class is a multiple of
/// the minimal class; always infeasible.
pub fn smooth_in_codim1_check(g: usize) -> Result<BoundReport> {
    if g < 3 {
        return Err(Error::InvalidInput("need g ≥ 3".into()));
    }
    let c = Component::new(g - 2, 2, 1).flagged(ComponentFlags {
        simple_non_jacobian: false,
        minimal_class: true,
    });
    multbound_check(&SingularityProfile::new(g, vec![c])?, None)
}

fn check_g(g: usize) -> Result<()> {
    if g < 3 {
        return Err(Error::InvalidInput("need g ≥ 3".into()));
    }
    Ok(())
}

/// `⌊(g! - 4)/2⌋`: isolated singular points are at least double and each
/// costs at least 2.
pub fn max_isolated_points(g: usize) -> Result<BigInt> {
    check_g(g)?;
    Ok((factorial(g) - 4) / 2)
}

/// Largest `m` with `m (m-1)^{g-1} ≤ g! - 4`.
pub fn max_isolated_multiplicity(g: usize) -> Result<u64> {
    check_g(g)?;
    let cap = factorial(g) - 4;
    let cost = |m: u64| BigInt::from(m) * num_traits::pow(BigInt::from(m - 1), g - 1);
    let mut m = 2;
    while cost(m + 1) <= cap {
        m += 1;
    }
    Ok(m)
}

/// The conjectured multiplicity bound `⌊(g+1)/2⌋`, for display only.
pub fn conjectural_multiplicity(g: usize) -> usize {
    g.div_ceil(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnownDegrees {
    pub g: usize,
    #[serde(serialize_with = "ser_big")]
    pub decomposable: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub hyperelliptic: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub jacobian: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub smooth: BigInt,
    pub cubic_threefold: Option<u64>,
}

impl KnownDegrees {
    /// `(label, degree)` rows for indecomposable entries.
    pub fn indecomposable(&self) -> Vec<(&'static str, BigInt)> {
        let mut out = vec![
            ("hyperelliptic", self.hyperelliptic.clone()),
            ("jacobian", self.jacobian.clone()),
            ("smooth", self.smooth.clone()),
        ];
        if let Some(c) = self.cubic_threefold {
            out.push(("cubic-threefold", BigInt::from(c)));
        }
        out
    }
}

impl fmt::Display for KnownDegrees {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "g = {}", self.g)?;
        writeln!(f, "{:<16} {:>12}", "decomposable", self.decomposable)?;
        let rows = self.indecomposable();
        for (i, (label, d)) in rows.iter().enumerate() {
            write!(f, "{label:<16} {d:>12}")?;
            if i + 1 < rows.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Gauss-map degrees of the standard families in dimension `g`.
pub fn known_degrees(g: usize) -> Result<KnownDegrees> {
    if g < 2 {
        return Err(Error::InvalidInput("need g ≥ 2".into()));
    }
    Ok(KnownDegrees {
        g,
        decomposable: BigInt::zero(),
        hyperelliptic: num_traits::pow(BigInt::from(2), g - 1),
        jacobian: binomial(BigInt::from(2 * g - 2), BigInt::from(g - 1)),
        smooth: factorial(g),
        cubic_threefold: (g == 5).then(clemens_griffiths_degree),
    })
}

/// Gauss degree of a non-Jacobian indecomposable fourfold with `k` vanishing
/// theta-nulls, each an ordinary double point.
pub fn genus4_degree(k: u32) -> Result<u64> {
    if k > 10 {
        return Err(Error::InvalidInput(format!("{k} vanishing theta-nulls; at most 10 are possible")));
    }
    Ok(24 - 2 * u64::from(k))
}

/// Ordered pairs of disjoint lines on a cubic surface, divided by `3!`.
pub fn clemens_griffiths_degree() -> u64 {
    27 * 16 / 6
}

/// One labelled piece of a Gauss locus `G_d^{(g)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub g: usize,
    pub degree: u64,
    pub locus: &'static str,
    /// Dimension of the piece, when it is a single irreducible component.
    pub dim: Option<usize>,
    /// `equal` if the locus is exactly this, `component` if it is one
    /// irreducible component among others.
    pub relation: &'static str,
}

const fn stratum(g: usize, degree: u64, locus: &'static str, dim: Option<usize>, relation: &'static str) -> Stratum {
    Stratum {
        g,
        degree,
        locus,
        dim,
        relation,
    }
}

const STRATA: &[Stratum] = &[
    stratum(2, 0, "A2^dec", None, "equal"),
    stratum(2, 2, "A2", Some(3), "equal"),
    stratum(3, 0, "A3^dec", None, "equal"),
    stratum(3, 2, "A3^dec", None, "equal"),
    stratum(3, 4, "closure(H3)", Some(5), "equal"),
    stratum(3, 6, "A3", Some(6), "equal"),
    stratum(4, 0, "A1 x A3", Some(7), "component"),
    stratum(4, 0, "A2 x A2", Some(6), "component"),
    stratum(4, 4, "A4^dec", None, "component"),
    stratum(4, 4, "{A_V} (Varley)", Some(0), "component"),
    stratum(4, 8, "H4", Some(7), "component"),
    stratum(4, 8, "theta-nulls k = 8 near A_V", Some(2), "component"),
    stratum(4, 20, "J4", Some(9), "component"),
    stratum(4, 20, "theta-nulls k = 2 near A_V", Some(8), "component"),
    stratum(4, 24, "A4", Some(10), "equal"),
];

/// Known descriptions of the Gauss loci for `g ≤ 4`.
pub fn strata_tables(g: usize) -> Result<Vec<Stratum>> {
    if !(2..=4).contains(&g) {
        return Err(Error::Unsupported(format!("no stratification table for g = {g}")));
    }
    Ok(STRATA.iter().filter(|s| s.g == g).cloned().collect())
}

/// Aligned text rendering of [`strata_tables`].
pub fn format_strata(rows: &[Stratum]) -> String {
    let mut out = format!("{:>3} {:>6}  {:<28} {:>4}  {}\n", "g", "deg", "locus", "dim", "relation");
    for s in rows {
        let dim = s.dim.map_or_else(|| "-".to_string(), |d| d.to_string());
        out.push_str(&format!(
            "{:>3} {:>6}  {:<28} {:>4}  {}\n",
            s.g, s.degree, s.locus, dim, s.relation
        ));
    }
    out
}

/// `true` when `v` is even and in `[4, g!]`.
pub fn is_admissible_degree(g: usize, v: &BigInt) -> bool {
    !v.is_negative() && (v % 2u32).is_zero() && *v >= BigInt::from(4) && *v <= factorial(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(g: usize, comps: &[(usize, u32, u64)]) -> SingularityProfile {
        SingularityProfile::new(g, comps.iter().map(|&(d, m, deg)| Component::new(d, m, deg)).collect()).unwrap()
    }

    #[test]
    fn main_inequality_examples() {
        let r = multbound_check(&profile(4, &[(0, 3, 1)]), None).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.feasible), (24.into(), 20.into(), false));
        assert_eq!(r.implied_max_degree, BigInt::zero());

        let varley = profile(4, &[(0, 2, 1); 10]);
        let r = multbound_check(&varley, Some(4)).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.feasible), (20.into(), 20.into(), true));
        assert_eq!(r.implied_max_degree, 4.into());

        let ran = Component::new(1, 2, 1).flagged(ComponentFlags {
            simple_non_jacobian: true,
            minimal_class: false,
        });
        let r = multbound_check(&SingularityProfile::new(5, vec![ran]).unwrap(), None).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.feasible, r.rule), (12.into(), 116.into(), true, Rule::Ran));
    }

    #[test]
    fn both_flags_take_the_larger_bound() {
        let both = ComponentFlags {
            simple_non_jacobian: true,
            minimal_class: true,
        };
        // d = 0: hodge bound 1 < g + 1
        let r = multbound_check(
            &SingularityProfile::new(5, vec![Component::new(0, 2, 1).flagged(both)]).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!((r.terms[0].degree_bound.clone(), r.terms[0].rule), (6.into(), Rule::Ran));
        // d = 2: hodge bound 5!/3! = 20
        let r = multbound_check(
            &SingularityProfile::new(5, vec![Component::new(2, 2, 1).flagged(both)]).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!((r.terms[0].degree_bound.clone(), r.terms[0].rule), (20.into(), Rule::Hodge));
        // a given degree above both bounds wins
        let r = multbound_check(
            &SingularityProfile::new(5, vec![Component::new(0, 2, 50).flagged(both)]).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!((r.terms[0].degree_bound.clone(), r.terms[0].rule), (50.into(), Rule::Main));
    }

    #[test]
    fn invalid_profiles() {
        assert!(SingularityProfile::new(4, vec![Component::new(4, 2, 1)]).is_err());
        assert!(SingularityProfile::new(4, vec![Component::new(0, 1, 1)]).is_err());
        assert!(SingularityProfile::new(4, vec![Component::new(0, 2, 0)]).is_err());
        assert!(multbound_check(&SingularityProfile::smooth(4), Some(5)).is_err());
        assert!(multbound_check(&SingularityProfile::smooth(4), Some(2)).is_err());
        assert!(multbound_check(&SingularityProfile::smooth(4), Some(26)).is_err());
    }

    #[test]
    fn codim_one_is_excluded() {
        for (g, lhs) in [(4, 24), (5, 120)] {
            let r = smooth_in_codim1_check(g).unwrap();
            assert_eq!(r.lhs, BigInt::from(lhs));
            assert!(!r.feasible);
        }
        for g in 3..=12 {
            let r = smooth_in_codim1_check(g).unwrap();
            assert_eq!(r.lhs, factorial(g));
            assert!(!r.feasible);
        }
        assert!(smooth_in_codim1_check(2).is_err());
    }

    #[test]
    fn isolated_point_bounds() {
        assert_eq!(max_isolated_points(5).unwrap(), 58.into());
        assert_eq!(max_isolated_points(3).unwrap(), 1.into());
        assert_eq!(max_isolated_multiplicity(4).unwrap(), 2);
        for g in 3..=12 {
            let m = max_isolated_multiplicity(g).unwrap();
            assert!(m as usize <= g.div_ceil(2) + 1, "g = {g}, m = {m}");
            // the bound is attained by one isolated point of multiplicity m
            let one = profile(g, &[(0, m as u32, 1)]);
            assert!(multbound_check(&one, None).unwrap().feasible);
            let next = profile(g, &[(0, m as u32 + 1, 1)]);
            assert!(!multbound_check(&next, None).unwrap().feasible);
            // and the point count by double points
            let n = max_isolated_points(g).unwrap().to_usize().unwrap();
            if n <= 400 {
                assert!(multbound_check(&profile(g, &vec![(0, 2, 1); n]), None).unwrap().feasible);
                assert!(!multbound_check(&profile(g, &vec![(0, 2, 1); n + 1]), None).unwrap().feasible);
            }
        }
    }

    #[test]
    fn known_degree_tables() {
        let k4 = known_degrees(4).unwrap();
        assert_eq!((k4.hyperelliptic.clone(), k4.jacobian.clone(), k4.smooth.clone()), (8.into(), 20.into(), 24.into()));
        let k5 = known_degrees(5).unwrap();
        assert_eq!(
            (k5.hyperelliptic.clone(), k5.jacobian.clone(), k5.smooth.clone(), k5.cubic_threefold),
            (16.into(), 70.into(), 120.into(), Some(72))
        );
        assert_eq!(known_degrees(2).unwrap().smooth, 2.into());
        assert!(known_degrees(1).is_err());
        for g in 3..=10 {
            let k = known_degrees(g).unwrap();
            assert!(k.decomposable.is_zero());
            for (label, d) in k.indecomposable() {
                assert!(is_admissible_degree(g, &d), "g = {g}: {label} = {d}");
            }
            // the smooth degree forces an empty profile
            let smooth = k.smooth.to_u64().unwrap();
            assert!(multbound_check(&SingularityProfile::smooth(g), Some(smooth)).unwrap().feasible);
            assert!(!multbound_check(&profile(g, &[(0, 2, 1)]), Some(smooth)).unwrap().feasible);
        }
    }

    #[test]
    fn cubic_threefold() {
        assert_eq!(clemens_griffiths_degree(), 72);
        assert_eq!(BigInt::from(72), factorial(5) - 48);
        let k5 = known_degrees(5).unwrap();
        assert!(BigInt::from(72) != k5.hyperelliptic && BigInt::from(72) != k5.jacobian);
    }

    #[test]
    fn genus_four() {
        assert_eq!(genus4_degree(10).unwrap(), 4);
        assert_eq!(genus4_degree(0).unwrap(), 24);
        assert_eq!(genus4_degree(2).unwrap(), 20);
        assert!(genus4_degree(11).is_err());
        for k in 0..10 {
            assert!(genus4_degree(k).unwrap() > genus4_degree(k + 1).unwrap());
        }
        // k ordinary double points: the main inequality is tight
        for k in 1..=10 {
            let r = multbound_check(&profile(4, &vec![(0, 2, 1); k as usize]), Some(genus4_degree(k).unwrap()))
                .unwrap();
            assert!(r.feasible);
            assert_eq!(r.implied_max_degree, BigInt::from(genus4_degree(k).unwrap()));
        }
    }

    #[test]
    fn strata() {
        let t3 = strata_tables(3).unwrap();
        assert_eq!(t3.iter().map(|s| s.degree).collect::<Vec<_>>(), vec![0, 2, 4, 6]);
        let t4 = strata_tables(4).unwrap();
        let g20: Vec<_> = t4.iter().filter(|s| s.degree == 20).filter_map(|s| s.dim).collect();
        assert_eq!(g20, vec![9, 8]);
        assert!(t4.iter().any(|s| s.degree == 4 && s.dim == Some(0)));
        assert!(strata_tables(5).is_err());
        let text = format_strata(&t4);
        assert!(text.lines().count() == t4.len() + 1);
        // indecomposable loci sit at admissible degrees
        for s in t3.iter().chain(&t4).filter(|s| !s.locus.contains("dec") && !s.locus.contains(" x ")) {
            assert!(is_admissible_degree(s.g, &BigInt::from(s.degree)), "{s:?}");
        }
    }

    #[test]
    fn reports_serialize() {
        let r = multbound_check(&profile(4, &[(0, 3, 1)]), None).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["lhs"], 24);
        assert_eq!(v["rule"], "main");
        let big = multbound_check(&profile(25, &[(0, 2, 1)]), None).unwrap();
        let v = serde_json::to_value(&big).unwrap();
        assert!(v["rhs"].is_string());
        assert!(r.to_string().contains("feasible: false"));
    }
}
