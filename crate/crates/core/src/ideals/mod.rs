//! Ideals with cached Gröbner bases and the operations built on them.

mod rng;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

pub use rng::{generic_combinations, linear_rank, random_combination, Rng, COEFFICIENT_HEIGHT, RESAMPLE_BUDGET};

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::gb::{groebner, Colength, GroebnerBasis, HilbertData};
use crate::poly::{Monomial, MonomialOrder, Polynomial};

/// Iteration cap for saturation loops.
pub const SATURATION_CAP: u32 = 64;

type Cache<F> = Arc<RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis<F>>>>>;

/// An ideal of `F[x1..xN]` given by generators.
///
/// Gröbner bases are computed on demand and cached per monomial order. The
/// cache is shared between clones, which is sound because clones have the
/// same generators.
pub struct Ideal<F: Field> {
    field: F,
    nvars: usize,
    gens: Vec<Polynomial<F>>,
    cache: Cache<F>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        Ideal {
            field: self.field.clone(),
            nvars: self.nvars,
            gens: self.gens.clone(),
            cache: Arc::clone(&self.cache),
        }
    }
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.gens).finish()
    }
}

impl<F: Field> fmt::Display for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl<F: Field> Ideal<F> {
    /// Zero generators are dropped.
    pub fn new(field: F, nvars: usize, gens: Vec<Polynomial<F>>) -> Result<Self> {
        for g in &gens {
            if g.nvars() != nvars || g.field() != &field {
                return Err(Error::RingMismatch(format!(
                    "generator {g} does not live in the ring with {nvars} variables over {}",
                    field.kind()
                )));
            }
        }
        Ok(Self::new_unchecked(field, nvars, gens))
    }

    fn new_unchecked(field: F, nvars: usize, gens: Vec<Polynomial<F>>) -> Self {
        Ideal {
            field,
            nvars,
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: Arc::default(),
        }
    }

    /// Ideal generated by a reduced basis, with the basis pre-cached.
    pub fn from_basis(gb: GroebnerBasis<F>) -> Self {
        let ideal = Self::new_unchecked(gb.field().clone(), gb.nvars(), gb.generators().to_vec());
        ideal.cache.write().expect("cache lock").insert(gb.order(), Arc::new(gb));
        ideal
    }

    pub fn zero(field: F, nvars: usize) -> Self {
        Self::new_unchecked(field, nvars, Vec::new())
    }

    pub fn unit(field: F, nvars: usize) -> Self {
        let one = Polynomial::one(field.clone(), nvars);
        Self::new_unchecked(field, nvars, vec![one])
    }

    /// The ideal of the variables, i.e. of the origin (or the irrelevant ideal).
    pub fn maximal(field: F, nvars: usize) -> Self {
        let gens = (0..nvars).map(|i| Polynomial::var(field.clone(), nvars, i)).collect();
        Self::new_unchecked(field, nvars, gens)
    }

    pub fn principal(f: Polynomial<F>) -> Self {
        Self::new_unchecked(f.field().clone(), f.nvars(), vec![f])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Polynomial::is_homogeneous)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.field != other.field {
            return Err(Error::RingMismatch(format!(
                "ideals in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    fn check_poly(&self, f: &Polynomial<F>) -> Result<()> {
        if self.nvars != f.nvars() || &self.field != f.field() {
            return Err(Error::RingMismatch(format!(
                "polynomial in {} variables, ideal in {}",
                f.nvars(),
                self.nvars
            )));
        }
        Ok(())
    }

    /// Reduced Gröbner basis for `order`, computed once and cached.
    pub fn groebner(&self, order: MonomialOrder) -> Arc<GroebnerBasis<F>> {
        if let Some(gb) = self.cache.read().expect("cache lock").get(&order) {
            return Arc::clone(gb);
        }
        let gb = Arc::new(
            groebner(&self.field, self.nvars, &self.gens, order).expect("generators checked"),
        );
        let mut cache = self.cache.write().expect("cache lock");
        Arc::clone(cache.entry(order).or_insert(gb))
    }

    /// Grevlex basis.
    pub fn gb(&self) -> Arc<GroebnerBasis<F>> {
        self.groebner(MonomialOrder::Grevlex)
    }

    /// Same ideal, generated by its reduced grevlex basis.
    pub fn reduced(&self) -> Self {
        Self::from_basis((*self.gb()).clone())
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        self.check_poly(f)?;
        self.gb().contains(f)
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Self) -> Result<bool> {
        self.check_ring(other)?;
        let gb = self.gb();
        for g in &other.gens {
            if !gb.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as ideals (reduced grevlex bases coincide).
    pub fn equals(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.field == other.field
            && self.gb().generators() == other.gb().generators()
    }

    pub fn hilbert(&self) -> Result<HilbertData> {
        self.gb().hilbert()
    }

    pub fn colength(&self) -> Colength {
        self.gb().colength()
    }

    /// Krull dimension of the quotient ring; `-1` for the unit ideal.
    pub fn affine_dimension(&self) -> i64 {
        self.gb().affine_dimension()
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Self::new_unchecked(self.field.clone(), self.nvars, gens))
    }

    /// `self + (f)`.
    pub fn with(&self, f: Polynomial<F>) -> Result<Self> {
        self.check_poly(&f)?;
        let mut gens = self.gens.clone();
        gens.push(f);
        Ok(Self::new_unchecked(self.field.clone(), self.nvars, gens))
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                let p = a * b;
                if !gens.contains(&p) {
                    gens.push(p);
                }
            }
        }
        Ok(Self::new_unchecked(self.field.clone(), self.nvars, gens))
    }

    pub fn power(&self, t: u32) -> Result<Self> {
        if t == 0 {
            return Ok(Self::unit(self.field.clone(), self.nvars));
        }
        let mut acc = self.clone();
        for _ in 1..t {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// `self ∩ other` by eliminating a tag variable from `t·I + (1-t)·J`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field.clone(), self.nvars));
        }
        if self.contains_ideal(other)? {
            return Ok(other.clone());
        }
        if other.contains_ideal(self)? {
            return Ok(self.clone());
        }
        let n = self.nvars;
        let t = Polynomial::var(self.field.clone(), n + 1, 0);
        let one_minus_t = &Polynomial::one(self.field.clone(), n + 1) - &t;
        let mut gens: Vec<Polynomial<F>> = self.gens.iter().map(|f| &t * &f.widen(0, 1)).collect();
        gens.extend(other.gens.iter().map(|g| &one_minus_t * &g.widen(0, 1)));
        let gb = groebner(&self.field, n + 1, &gens, MonomialOrder::Block(1))?;
        let kept = gb
            .generators()
            .iter()
            .filter_map(|g| g.narrow(0, 1))
            .collect();
        Ok(Self::new_unchecked(self.field.clone(), n, kept))
    }

    fn intersect_all(parts: Vec<Self>) -> Result<Self> {
        let mut it = parts.into_iter();
        let mut acc = it.next().expect("at least one part");
        for p in it {
            acc = acc.intersect(&p)?;
        }
        Ok(acc)
    }

    /// `self : other`.
    pub fn quotient(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if other.is_zero() {
            return Ok(Self::unit(self.field.clone(), self.nvars));
        }
        let parts = other
            .gens
            .iter()
            .map(|g| self.quotient_by(g))
            .collect::<Result<Vec<_>>>()?;
        Self::intersect_all(parts)
    }

    /// `self : (f)`.
    pub fn quotient_by(&self, f: &Polynomial<F>) -> Result<Self> {
        self.check_poly(f)?;
        if f.is_zero() || self.contains(f)? {
            return Ok(Self::unit(self.field.clone(), self.nvars));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        if self.is_homogeneous() && is_linear_form(f) {
            return Ok(self.linear_colon(f, false).0);
        }
        self.quotient_by_tag(f)
    }

    fn quotient_by_tag(&self, f: &Polynomial<F>) -> Result<Self> {
        let inter = self.intersect(&Self::principal(f.clone()))?;
        let gens = inter
            .gens
            .iter()
            .map(|g| g.exact_div(f).ok_or_else(|| Error::Unsupported("inexact division".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new_unchecked(self.field.clone(), self.nvars, gens))
    }

    /// Colon by a linear form `f` of a homogeneous ideal, once or saturated.
    ///
    /// After a change of coordinates making `f` the last variable, a grevlex
    /// basis `{g}` of `I` gives `I : f` as `{g / f}` (dividing where possible)
    /// and `I : f^∞` by removing all factors of `f`. Returns the largest
    /// power removed, which is the saturation exponent.
    fn linear_colon(&self, f: &Polynomial<F>, saturate: bool) -> (Self, u32) {
        let n = self.nvars;
        let fld = &self.field;
        let k = (0..n)
            .rev()
            .find(|&i| !fld.is_zero(&f.coefficient(&Monomial::var(n, i, 1))))
            .expect("linear form has a variable");
        let single = f.num_terms() == 1;
        // x_k = (y_k - sum_{i != k} c_i y_i) / c_k
        let coeffs: Vec<F::Elem> = (0..n).map(|i| f.coefficient(&Monomial::var(n, i, 1))).collect();
        let ck_inv = fld.inv(&coeffs[k]).expect("nonzero");
        let zero_shift = vec![fld.zero(); n];
        let forward: Vec<Vec<F::Elem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i != k {
                            if i == j { fld.one() } else { fld.zero() }
                        } else if j == k {
                            ck_inv.clone()
                        } else {
                            fld.neg(&fld.mul(&coeffs[j], &ck_inv))
                        }
                    })
                    .collect()
            })
            .collect();
        let backward: Vec<Vec<F::Elem>> = (0..n)
            .map(|i| {
                if i == k {
                    coeffs.clone()
                } else {
                    (0..n).map(|j| if i == j { fld.one() } else { fld.zero() }).collect()
                }
            })
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(k, n - 1);
        let moved: Vec<Polynomial<F>> = self
            .gens
            .iter()
            .map(|g| {
                let h = if single {
                    g.clone()
                } else {
                    g.substitute_affine_unchecked(&forward, &zero_shift)
                };
                h.permute_vars(&perm)
            })
            .collect();
        let gb = groebner(fld, n, &moved, MonomialOrder::Grevlex).expect("same ring");
        let last = Monomial::var(n, n - 1, 1);
        let mut max_removed = 0u32;
        let gens = gb
            .generators()
            .iter()
            .map(|g| {
                let e = g.terms().map(|(m, _)| m.exponents()[n - 1]).min().unwrap_or(0);
                let remove = if saturate { e } else { e.min(1) };
                max_removed = max_removed.max(remove as u32);
                let mut q = g.clone();
                for _ in 0..remove {
                    q = q.exact_div(&Polynomial::monomial(fld.clone(), n, last.clone(), fld.one()))
                        .expect("divisible by the last variable");
                }
                let q = q.permute_vars(&perm);
                if single {
                    q
                } else {
                    q.substitute_affine_unchecked(&backward, &zero_shift)
                }
            })
            .collect();
        (Self::new_unchecked(fld.clone(), n, gens), max_removed)
    }

    /// `self : other^∞` with the stabilization exponent.
    ///
    /// The exponent is the least `k` with `I : J^k = I : J^(k+1)`.
    pub fn saturate(&self, other: &Self) -> Result<(Self, u32)> {
        self.check_ring(other)?;
        if other.is_zero() {
            let k = u32::from(!self.is_unit());
            return Ok((Self::unit(self.field.clone(), self.nvars), k));
        }
        let other = other.reduced();
        if other.gens.len() == 1 {
            return self.saturate_by(&other.gens[0]);
        }
        // I : (g1,..,gr)^∞ = ∩ I : gi^∞
        let parts = other
            .gens
            .iter()
            .map(|g| self.saturate_by(g).map(|(s, _)| s))
            .collect::<Result<Vec<_>>>()?;
        let sat = Self::intersect_all(parts)?.reduced();
        let k = self.saturation_exponent(&sat, &other)?;
        Ok((sat, k))
    }

    /// Least `k` with `J^k · sat ⊆ I`, i.e. with `I : J^k` already saturated.
    ///
    /// Tracks a basis of the image of `J^k · sat` in `R/I` spanned by normal
    /// forms, so the work is bounded by the size of that image.
    fn saturation_exponent(&self, sat: &Self, j: &Self) -> Result<u32> {
        let gb = self.gb();
        let mut pending = Echelon::new(self.field.clone());
        for g in &sat.gens {
            pending.insert(gb.normal_form(g)?);
        }
        for k in 0..SATURATION_CAP {
            if pending.rows.is_empty() {
                return Ok(k);
            }
            let mut next = Echelon::new(self.field.clone());
            for w in &pending.rows {
                for g in &j.gens {
                    next.insert(gb.normal_form(&(w * g))?);
                }
            }
            pending = next;
        }
        Err(Error::CapExceeded {
            cap: SATURATION_CAP,
            context: "saturation did not stabilize".into(),
        })
    }

    #[cfg(test)]
    fn saturate_loop(&self, other: &Self) -> Result<(Self, u32)> {
        let mut cur = self.clone();
        for k in 0..SATURATION_CAP {
            let next = cur.quotient(other)?;
            if next.equals(&cur) {
                return Ok((cur, k));
            }
            cur = next;
        }
        Err(Error::CapExceeded {
            cap: SATURATION_CAP,
            context: "saturation did not stabilize".into(),
        })
    }

    /// `self : f^∞` with the stabilization exponent.
    pub fn saturate_by(&self, f: &Polynomial<F>) -> Result<(Self, u32)> {
        self.check_poly(f)?;
        if f.is_zero() {
            let unit = Self::unit(self.field.clone(), self.nvars);
            let k = u32::from(!self.is_unit());
            return Ok((unit, k));
        }
        if self.is_homogeneous() && is_linear_form(f) && !self.is_unit() {
            let (sat, k) = self.linear_colon(f, true);
            return Ok((sat.reduced(), k));
        }
        self.saturate_by_loop(f)
    }

    fn saturate_by_loop(&self, f: &Polynomial<F>) -> Result<(Self, u32)> {
        let mut cur = self.clone();
        for k in 0..SATURATION_CAP {
            let next = cur.quotient_by(f)?;
            if next.equals(&cur) {
                return Ok((cur.reduced(), k));
            }
            cur = next;
        }
        Err(Error::CapExceeded {
            cap: SATURATION_CAP,
            context: "saturation did not stabilize".into(),
        })
    }

    /// `self ∩ F[kept variables]`, where `vars` lists the eliminated indices.
    pub fn eliminate(&self, vars: &[usize]) -> Result<Self> {
        let n = self.nvars;
        if let Some(&bad) = vars.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidInput(format!("variable index {bad} out of range")));
        }
        let mut order: Vec<usize> = vars.to_vec();
        order.sort_unstable();
        order.dedup();
        let k = order.len();
        order.extend((0..n).filter(|i| !vars.contains(i)));
        // perm sends old index -> new index
        let mut perm = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let moved: Vec<Polynomial<F>> = self.gens.iter().map(|g| g.permute_vars(&perm)).collect();
        let gb = groebner(&self.field, n, &moved, MonomialOrder::Block(k))?;
        let kept = gb
            .generators()
            .iter()
            .filter(|g| g.terms().all(|(m, _)| m.exponents()[..k].iter().all(|&e| e == 0)))
            .map(|g| g.permute_vars(&order))
            .collect();
        Ok(Self::new_unchecked(self.field.clone(), n, kept))
    }

    /// `f ∈ √I`, via `1 ∈ I + (1 - t f)`.
    pub fn radical_contains(&self, f: &Polynomial<F>) -> Result<bool> {
        self.check_poly(f)?;
        let n = self.nvars;
        let t = Polynomial::var(self.field.clone(), n + 1, 0);
        let mut gens: Vec<Polynomial<F>> = self.gens.iter().map(|g| g.widen(0, 1)).collect();
        gens.push(&Polynomial::one(self.field.clone(), n + 1) - &(&t * &f.widen(0, 1)));
        Ok(groebner(&self.field, n + 1, &gens, MonomialOrder::Grevlex)?.is_unit())
    }

    /// Image under the coefficient map `f`; `None` if a coefficient has no image.
    pub fn map_coefficients<G: Field>(
        &self,
        target: &G,
        mut f: impl FnMut(&F::Elem) -> Option<G::Elem>,
    ) -> Option<Ideal<G>> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.map_coefficients(target, &mut f))
            .collect::<Option<Vec<_>>>()?;
        Some(Ideal::new_unchecked(target.clone(), self.nvars, gens))
    }

    /// Applies `f(M x + t)` to every generator.
    pub fn substitute_linear(&self, matrix: &[Vec<F::Elem>], shift: &[F::Elem]) -> Result<Self> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.substitute_linear(matrix, shift))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new_unchecked(self.field.clone(), self.nvars, gens))
    }
}

impl Ideal<Rationals> {
    /// Reduction modulo `p`; `None` if some denominator vanishes.
    pub fn reduce_mod(&self, p: &PrimeField) -> Option<Ideal<PrimeField>> {
        self.map_coefficients(p, |c| p.from_rational(c))
    }
}

/// Linearly independent polynomials with distinct monic leading terms.
struct Echelon<F: Field> {
    field: F,
    rows: Vec<Polynomial<F>>,
    leads: Vec<Monomial>,
}

impl<F: Field> Echelon<F> {
    fn new(field: F) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            leads: Vec::new(),
        }
    }

    fn insert(&mut self, mut p: Polynomial<F>) {
        let order = MonomialOrder::Grevlex;
        loop {
            let Ok((m, c)) = p.leading_term(order) else {
                return;
            };
            match self.leads.iter().position(|l| *l == m) {
                Some(i) => p = &p - &self.rows[i].scale(&c),
                None => {
                    let inv = self.field.inv(&c).expect("nonzero");
                    self.rows.push(p.scale(&inv));
                    self.leads.push(m);
                    return;
                }
            }
        }
    }
}

pub(crate) fn is_linear_form<F: Field>(f: &Polynomial<F>) -> bool {
    !f.is_zero() && f.terms().all(|(m, _)| m.degree() == 1)
}

#[cfg(test)]
mod tests;
