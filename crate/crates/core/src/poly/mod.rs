//! Sparse multivariate polynomials over a [`Field`].

mod monomial;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use monomial::{Monomial, MonomialOrder};
pub use parse::VarNames;

use crate::error::{Error, Result};
use crate::field::Field;

/// A polynomial in `x1..xN` with coefficients in `F`.
///
/// Terms live in a map keyed by exponent vector and never hold a zero
/// coefficient. Two polynomials can only be combined when they share the
/// same ring context (field and variable count); the operator impls panic on
/// a mismatch, the `checked_*` methods report it.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> std::hash::Hash for Polynomial<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.nvars.hash(state);
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, nvars, Monomial::one(nvars), c)
    }

    pub fn one(field: F, nvars: usize) -> Self {
        let one = field.one();
        Self::constant(field, nvars, one)
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let one = field.one();
        Self::monomial(field, nvars, Monomial::var(nvars, i, 1), one)
    }

    pub fn monomial(field: F, nvars: usize, m: Monomial, c: F::Elem) -> Self {
        assert_eq!(m.nvars(), nvars);
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(m, c);
        }
        Polynomial { field, nvars, terms }
    }

    /// Builds a polynomial from terms, summing repeated monomials.
    pub fn from_terms(
        field: F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, &c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &F::Elem) {
        if self.field.is_zero(c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in storage order (lexicographic on exponent vectors, ascending).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    /// Terms sorted by `order`, largest first.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &F::Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Constant term.
    pub fn constant_term(&self) -> F::Elem {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Maximal total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Result<(Monomial, F::Elem)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(Error::ZeroPolynomial("leading term"))
    }

    /// Minimal total degree of a term: the multiplicity at the origin.
    pub fn order_at_origin(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .min()
            .ok_or(Error::ZeroPolynomial("order at the origin"))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.field != other.field {
            return Err(Error::RingMismatch(format!(
                "{} variables over {} vs {} variables over {}",
                self.nvars,
                self.field.kind(),
                other.nvars,
                other.field.kind()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &self.field.neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.nvars);
        }
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone(), self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_term(order) {
            Ok((_, c)) => self.scale(&self.field.inv(&c).expect("nonzero")),
            Err(_) => self.clone(),
        }
    }

    /// Formal partial derivative with respect to the variable of index `i`.
    pub fn differentiate(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.exponents_mut()[i] = e - 1;
            out.add_term(d, &self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        out
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.nvars);
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// `f(M x + t)`: each `x_i` is replaced by `sum_j M[i][j] x_j + t_i`.
    pub fn substitute_linear(&self, matrix: &[Vec<F::Elem>], shift: &[F::Elem]) -> Result<Self> {
        let n = self.nvars;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) || shift.len() != n {
            return Err(Error::InvalidInput(format!(
                "substitution needs a {n}x{n} matrix and a length-{n} shift"
            )));
        }
        if !is_invertible(&self.field, matrix) {
            return Err(Error::SingularMatrix);
        }
        Ok(self.substitute_affine_unchecked(matrix, shift))
    }

    /// `f(M x + t)` without the invertibility check (used for slicing maps).
    pub(crate) fn substitute_affine_unchecked(
        &self,
        matrix: &[Vec<F::Elem>],
        shift: &[F::Elem],
    ) -> Self {
        let n = self.nvars;
        let field = &self.field;
        let images: Vec<Polynomial<F>> = (0..n)
            .map(|i| {
                let mut l = Self::constant(field.clone(), n, shift[i].clone());
                for (j, c) in matrix[i].iter().enumerate() {
                    l.add_term(Monomial::var(n, j, 1), c);
                }
                l
            })
            .collect();
        let mut powers: Vec<Vec<Polynomial<F>>> = images
            .iter()
            .map(|l| vec![Self::one(field.clone(), n), l.clone()])
            .collect();
        let mut out = Self::zero(field.clone(), n);
        for (m, c) in &self.terms {
            let mut t = Self::constant(field.clone(), n, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())).collect(),
        }
    }

    /// Embeds into a ring with `count` fresh variables inserted at position `at`.
    pub fn widen(&self, at: usize, count: usize) -> Self {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars + count,
            terms: self.terms.iter().map(|(m, c)| (m.widened(at, count), c.clone())).collect(),
        }
    }

    /// Drops variables `at..at+count`; `None` if any of them occurs.
    pub fn narrow(&self, at: usize, count: usize) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.narrowed(at, count)?, c.clone());
        }
        Some(Polynomial {
            field: self.field.clone(),
            nvars: self.nvars - count,
            terms,
        })
    }

    /// Sets variable `i` to the constant `value` and removes it from the ring.
    pub fn specialize_var(&self, i: usize, value: &F::Elem) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.nvars - 1);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            let mut coef = c.clone();
            for _ in 0..e {
                coef = f.mul(&coef, value);
            }
            let mut mm = m.clone();
            mm.exponents_mut()[i] = 0;
            out.add_term(mm.narrowed(i, 1).expect("cleared"), &coef);
        }
        out
    }

    /// Homogenizes with a new variable inserted at position `at`.
    pub fn homogenize(&self, at: usize) -> Self {
        let d = self.total_degree().unwrap_or(0);
        let mut out = Self::zero(self.field.clone(), self.nvars + 1);
        for (m, c) in &self.terms {
            let mut w = m.widened(at, 1);
            w.exponents_mut()[at] = (d - m.degree()) as u16;
            out.add_term(w, c);
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.check_ring(divisor).ok()?;
        let order = MonomialOrder::Grevlex;
        let (lm, lc) = divisor.leading_term(order).ok()?;
        let lc_inv = self.field.inv(&lc)?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.field.clone(), self.nvars);
        while let Ok((m, c)) = rem.leading_term(order) {
            let q = lm.quotient_of(&m)?;
            let coef = self.field.mul(&c, &lc_inv);
            let step = Self::monomial(self.field.clone(), self.nvars, q, coef);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Some(quot)
    }

    /// Maps coefficients into another field; `None` if some coefficient has no image.
    pub fn map_coefficients<G: Field>(
        &self,
        target: &G,
        mut f: impl FnMut(&F::Elem) -> Option<G::Elem>,
    ) -> Option<Polynomial<G>> {
        let mut out = Polynomial::zero(target.clone(), self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c)?);
        }
        Some(out)
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of total degree `>= d`.
    pub fn truncate_below(&self, d: u32) -> Self {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl<F: Field> Polynomial<F>
where
    F: Field<Elem = num_rational::BigRational>,
{
    /// Reduction modulo a prime; `None` if a denominator vanishes.
    pub fn reduce_mod<G: Field>(&self, target: &G) -> Option<Polynomial<G>> {
        self.map_coefficients(target, |c| target.from_rational(c))
    }
}

/// Gaussian elimination test for invertibility of a square matrix.
pub(crate) fn is_invertible<F: Field>(field: &F, matrix: &[Vec<F::Elem>]) -> bool {
    rank(field, matrix.to_vec()) == matrix.len()
}

/// Rank of a dense matrix (rows of field elements).
pub(crate) fn rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(&rows[r][col]).expect("nonzero pivot");
        for i in r + 1..rows.len() {
            if field.is_zero(&rows[i][col]) {
                continue;
            }
            let factor = field.mul(&rows[i][col], &inv);
            for j in col..ncols {
                let t = field.mul(&factor, &rows[r][j]);
                rows[i][j] = field.sub(&rows[i][j], &t);
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&VarNames::canonical(self.nvars)))
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.checked_add(rhs).expect("ring mismatch in +")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.checked_sub(rhs).expect("ring mismatch in -")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.checked_mul(rhs).expect("ring mismatch in *")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.scale(&self.field.neg(&self.field.one()))
    }
}
