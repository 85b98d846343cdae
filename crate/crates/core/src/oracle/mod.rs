//! Independent checks: Macaulay-matrix colength, Segre-class closed forms for
//! linear base loci, the blown-up cubic example, and fiber counting.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::gb::Colength;
use crate::ideals::{generic_combinations, Ideal, Rng, RESAMPLE_BUDGET};
use crate::mult::monomials_of_degree;
use crate::poly::{Monomial, Polynomial};
use crate::vogel::{base_locus, VogelProblem};

/// Truncated univariate power series `Σ_{i ≤ order} c_i t^i` over `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTruncation {
    coeffs: Vec<BigRational>,
}

impl SeriesTruncation {
    /// Keeps terms up to `t^order`; missing coefficients are zero.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        SeriesTruncation { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::from_ints(&[1], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        SeriesTruncation { coeffs: out }
    }

    /// Inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::InvalidInput("series without constant term is not a unit".into()));
        }
        let inv0 = c0.recip();
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        out[0] = inv0.clone();
        for k in 1..out.len() {
            let mut s = BigRational::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -s * &inv0;
        }
        Ok(SeriesTruncation { coeffs: out })
    }

    /// Integer power; negative exponents need a unit.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one(self.order());
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }
}

/// `∫_B (1 + e·H)^N ∩ s(B, P^N)` for a linear `B ≅ P^b`: the coefficient of
/// `t^b` in `(1 + e t)^N (1 + t)^{-(N-b)}`.
pub fn segre_discrepancy_linear(n: usize, b: usize, e: u32) -> Result<BigInt> {
    if b >= n {
        return Err(Error::InvalidInput(format!("base locus dimension {b} must be below {n}")));
    }
    let l = SeriesTruncation::from_ints(&[1, i64::from(e)], b).powi(n as i64)?;
    let s = SeriesTruncation::from_ints(&[1, 1], b).powi(-((n - b) as i64))?;
    let c = l.mul(&s).coefficient(b);
    debug_assert!(c.is_integer());
    Ok(c.to_integer())
}

/// The cubic-surface example with `k` points blown up on the base line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlowupRecord {
    pub k: u32,
    pub degree_x_l: i64,
    pub degree_l_line: i64,
    pub delta: i64,
    pub degree: i64,
}

pub fn blowup_example(k: u32) -> Result<BlowupRecord> {
    if k > 12 {
        return Err(Error::InvalidInput(format!("k = {k} outside 0..=12")));
    }
    let k = i64::from(k);
    let degree_x_l = 27 - k;
    let degree_l_line = 3 - k;
    // the line contributes deg_L of its strict transform, the curve step contributes 4
    let delta = degree_l_line + 4;
    let degree = 20;
    assert_eq!(degree_x_l - delta, degree);
    Ok(BlowupRecord {
        k: k as u32,
        degree_x_l,
        degree_l_line,
        delta,
        degree,
    })
}

fn bit_size(c: &BigRational) -> u64 {
    c.numer().bits() + c.denom().bits()
}

/// Sparse row echelon keyed by the lowest column of each row.
struct SparseEchelon {
    pivots: HashMap<usize, Vec<(usize, BigRational)>>,
}

impl SparseEchelon {
    fn insert(&mut self, mut row: Vec<(usize, BigRational)>) {
        loop {
            let Some((lead, c)) = row.first().cloned() else {
                return;
            };
            let Some(piv) = self.pivots.get(&lead) else {
                let inv = c.recip();
                for (_, v) in row.iter_mut() {
                    *v *= &inv;
                }
                self.pivots.insert(lead, row);
                return;
            };
            row = axpy(&row, &c, piv);
        }
    }
}

/// `row - c·piv`, where `piv` is monic in `row`'s lead column.
fn axpy(row: &[(usize, BigRational)], c: &BigRational, piv: &[(usize, BigRational)]) -> Vec<(usize, BigRational)> {
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map_or(usize::MAX, |r| r.0);
        let cj = piv.get(j).map_or(usize::MAX, |r| r.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(c * &piv[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - c * &piv[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Local colength of `J` at the origin by linear algebra alone.
///
/// Rows are `m·g` truncated to degree `≤ cap` and columns are monomials by
/// ascending degree, so pivots in columns of degree `≤ t` give the rank of
/// `J + 𝔪^{t+1}` in degree `≤ t`. The first degree with no new standard
/// monomial ends the count. Past `cap` with no such degree the result is
/// `Infinite` if `cap ≥ D^n` (no isolated point can have larger length), and
/// an error otherwise.
pub fn macaulay_colength(j: &Ideal<Rationals>, cap: u32) -> Result<Colength> {
    let n = j.nvars();
    let gens: Vec<&Polynomial<Rationals>> = j.generators().iter().collect();
    if gens.iter().any(|g| !g.constant_term().is_zero()) {
        return Ok(Colength::Finite(0));
    }
    let mut columns: Vec<Monomial> = Vec::new();
    let mut start = Vec::with_capacity(cap as usize + 2);
    for d in 0..=cap {
        start.push(columns.len());
        columns.extend(monomials_of_degree(n, d));
    }
    start.push(columns.len());
    let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<(usize, BigRational)>> = Vec::new();
    for g in &gens {
        let ord = g.order_at_origin().unwrap_or(0);
        if ord > cap {
            continue;
        }
        for d in 0..=cap - ord {
            for m in monomials_of_degree(n, d) {
                let mut row: Vec<(usize, BigRational)> = g
                    .terms()
                    .filter(|(t, _)| t.degree() + d <= cap)
                    .map(|(t, c)| (index[&t.mul(&m)], c.clone()))
                    .collect();
                row.sort_by_key(|e| e.0);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    // small coefficients first, so they become the pivots
    rows.sort_by_cached_key(|r| (r.iter().map(|(_, c)| bit_size(c)).sum::<u64>(), r.len()));
    let mut ech = SparseEchelon { pivots: HashMap::new() };
    for r in rows {
        ech.insert(r);
    }
    let mut total = 0u64;
    for d in 0..=cap as usize {
        let width = start[d + 1] - start[d];
        let pivots = (start[d]..start[d + 1]).filter(|c| ech.pivots.contains_key(c)).count();
        let complement = (width - pivots) as u64;
        if complement == 0 {
            return Ok(Colength::Finite(total));
        }
        total += complement;
    }
    let max_deg = gens.iter().filter_map(|g| g.total_degree()).max().unwrap_or(1).max(1);
    let bezout = u64::from(max_deg).checked_pow(n as u32).unwrap_or(u64::MAX);
    if u64::from(cap) >= bezout {
        Ok(Colength::Infinite)
    } else {
        Err(Error::CapExceeded {
            cap,
            context: format!("degree cap too small to decide; {bezout} would settle it"),
        })
    }
}

/// A random integer point of `P^n` outside the base locus.
fn random_point<F: Field>(system: &[Polynomial<F>], n: usize, rng: &mut Rng) -> Option<(Vec<F::Elem>, Vec<F::Elem>)> {
    let field = system[0].field();
    for _ in 0..RESAMPLE_BUDGET {
        let q: Vec<F::Elem> = (0..n).map(|_| field.from_i64(rng.range(-20, 20))).collect();
        let w: Vec<F::Elem> = system.iter().map(|s| s.evaluate(&q)).collect();
        if w.iter().any(|v| !field.is_zero(v)) {
            return Some((q, w));
        }
    }
    None
}

/// Number of points, with multiplicity, in the fiber over one random target.
fn fiber_once<F: Field>(p: &VogelProblem<F>, ib: &Ideal<F>, dim: usize, mut rng: Rng) -> Result<Option<u64>> {
    let field = p.variety().field().clone();
    let nv = p.nvars();
    let sections = if p.variety().is_zero() {
        // sections vanishing where f(q) vanishes: the fiber through q
        let Some((_, w)) = random_point(p.system(), nv, &mut rng) else {
            return Ok(None);
        };
        let k = w.iter().position(|v| !field.is_zero(v)).expect("nonzero value");
        let hyperplane: Vec<Polynomial<F>> = (0..w.len())
            .filter(|&i| i != k)
            .map(|i| &p.system()[i].scale(&w[k]) - &p.system()[k].scale(&w[i]))
            .collect();
        generic_combinations(&hyperplane, dim, &mut rng)?
    } else {
        // `dim` generic sections: the preimage of a generic codimension-`dim` space
        generic_combinations(p.system(), dim, &mut rng)?
    };
    let mut gens = p.variety().generators().to_vec();
    gens.extend(sections);
    let cut = Ideal::new(field.clone(), nv, gens)?;
    let (away, _) = cut.saturate(ib)?;
    let (fiber, _) = away.saturate(&Ideal::maximal(field, nv))?;
    let h = fiber.hilbert()?;
    match h.dimension {
        -1 => Ok(Some(0)),
        0 => Ok(Some(h.degree)),
        _ => Ok(None),
    }
}

/// Degree of the map by counting a fiber away from the base locus, twice.
pub fn fiber_degree<F: Field>(p: &VogelProblem<F>, rng: &Rng) -> Result<u64> {
    let (dim, _) = p.variety_invariants()?;
    let ib = base_locus(p)?;
    let mut found = Vec::new();
    let mut label = 0;
    while found.len() < 2 {
        if label >= (2 + RESAMPLE_BUDGET) as u64 {
            return Err(Error::Genericity {
                attempts: label as usize,
                context: "every drawn fiber was positive-dimensional".into(),
            });
        }
        if let Some(d) = fiber_once(p, &ib, dim, rng.fork(label))? {
            found.push(d);
        }
        label += 1;
    }
    if found[0] != found[1] {
        return Err(Error::Disagreement(format!("fibers of degree {} and {}", found[0], found[1])));
    }
    Ok(found[0])
}
