//! Gröbner bases and the numerical invariants derived from them.

mod engine;
mod hilbert;

use std::fmt;

use serde::Serialize;

pub use hilbert::HilbertData;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, MonomialOrder, Polynomial};
use engine::{Engine, Row};

/// Length of a quotient ring: a finite count or the infinite signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Colength::Infinite
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(n) => write!(f, "{n}"),
            Colength::Infinite => f.write_str("infinite"),
        }
    }
}

/// A reduced Gröbner basis: monic, sorted by leading monomial (ascending).
#[derive(Clone, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    field: F,
    nvars: usize,
    order: MonomialOrder,
    polys: Vec<Polynomial<F>>,
    rows: Vec<Row<F::Elem>>,
}

impl<F: Field> fmt::Debug for GroebnerBasis<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroebnerBasis")
            .field("order", &self.order)
            .field("generators", &self.polys)
            .finish()
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner<F: Field>(
    field: &F,
    nvars: usize,
    gens: &[Polynomial<F>],
    order: MonomialOrder,
) -> Result<GroebnerBasis<F>> {
    for g in gens {
        if g.nvars() != nvars || g.field() != field {
            return Err(Error::RingMismatch(format!(
                "generator in {} variables over {}, ring has {nvars} over {}",
                g.nvars(),
                g.field().kind(),
                field.kind()
            )));
        }
    }
    let engine = Engine { field, order };
    let input: Vec<Row<F::Elem>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut r = engine.row_from_terms(g.terms());
            field.normalize(&mut r.coeffs);
            r
        })
        .collect();
    let rows = engine.groebner(input);
    Ok(GroebnerBasis::from_rows(field.clone(), nvars, order, rows))
}

impl<F: Field> GroebnerBasis<F> {
    fn from_rows(field: F, nvars: usize, order: MonomialOrder, rows: Vec<Row<F::Elem>>) -> Self {
        let polys = rows
            .iter()
            .map(|r| {
                Polynomial::from_terms(
                    field.clone(),
                    nvars,
                    r.mons.iter().cloned().zip(r.coeffs.iter().cloned()),
                )
            })
            .collect();
        GroebnerBasis {
            field,
            nvars,
            order,
            polys,
            rows,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.rows.iter().map(|r| r.lm().clone()).collect()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.rows.len() == 1 && self.rows[0].lm().is_one()
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        if f.nvars() != self.nvars || f.field() != &self.field {
            return Err(Error::RingMismatch("normal form in a different ring".into()));
        }
        let engine = Engine {
            field: &self.field,
            order: self.order,
        };
        let r = engine.normal_form(engine.row_from_terms(f.terms()), &self.rows);
        Ok(Polynomial::from_terms(
            self.field.clone(),
            self.nvars,
            r.mons.into_iter().zip(r.coeffs),
        ))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Hilbert data of `S/I`; needs a homogeneous ideal.
    pub fn hilbert(&self) -> Result<HilbertData> {
        if !self.polys.iter().all(Polynomial::is_homogeneous) {
            return Err(Error::NonHomogeneous);
        }
        Ok(HilbertData::from_leading_monomials(
            self.nvars,
            &self.leading_monomials(),
        ))
    }

    /// Krull dimension of `S/I` (`-1` for the unit ideal). Valid for any ideal.
    pub fn affine_dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let h = HilbertData::from_leading_monomials(self.nvars, &self.leading_monomials());
        h.krull_dimension() as i64
    }

    /// `dim_k S/I` by counting standard monomials.
    pub fn colength(&self) -> Colength {
        let lms = self.leading_monomials();
        staircase_count(self.nvars, &lms)
    }
}

/// Number of monomials outside the ideal generated by `lms`.
pub(crate) fn staircase_count(nvars: usize, lms: &[Monomial]) -> Colength {
    if lms.iter().any(Monomial::is_one) {
        return Colength::Finite(0);
    }
    let mut bounds = vec![u16::MAX; nvars];
    for m in lms {
        let support: Vec<usize> = (0..nvars).filter(|&i| m.exponents()[i] > 0).collect();
        if let [i] = support[..] {
            bounds[i] = bounds[i].min(m.exponents()[i]);
        }
    }
    if bounds.contains(&u16::MAX) {
        return Colength::Infinite;
    }
    let mut cur = Monomial::one(nvars);
    Colength::Finite(count_from(&mut cur, 0, &bounds, lms))
}

fn count_from(cur: &mut Monomial, var: usize, bounds: &[u16], lms: &[Monomial]) -> u64 {
    if var == bounds.len() {
        return 1;
    }
    let mut total = 0;
    for e in 0..bounds[var] {
        cur.exponents_mut()[var] = e;
        // divisibility only grows with e, and later variables start at zero
        if lms.iter().any(|m| m.divides(cur)) {
            break;
        }
        total += count_from(cur, var + 1, bounds, lms);
    }
    cur.exponents_mut()[var] = 0;
    total
}

#[cfg(test)]
mod tests;
