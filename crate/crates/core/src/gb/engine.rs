//! Buchberger's algorithm with sugar selection and the Gebauer–Möller update.
//!
//! Polynomials are kept as parallel vectors of monomials and coefficients
//! sorted ascending, so the leading term is the last entry. Over the
//! rationals all arithmetic is fraction free on primitive integer vectors.

use crate::field::Field;
use crate::poly::{Monomial, MonomialOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Row<E> {
    pub mons: Vec<Monomial>,
    pub coeffs: Vec<E>,
}

impl<E> Row<E> {
    pub fn is_empty(&self) -> bool {
        self.mons.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        self.mons.last().expect("nonzero row")
    }

    pub fn lc(&self) -> &E {
        self.coeffs.last().expect("nonzero row")
    }
}

struct Elt<E> {
    row: Row<E>,
    mask: u64,
    sugar: u32,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

pub(crate) struct Engine<'a, F: Field> {
    pub field: &'a F,
    pub order: MonomialOrder,
}

impl<F: Field> Engine<'_, F> {
    /// `alpha * a - beta * (shift * b)`, both ascending.
    fn combine(
        &self,
        alpha: &F::Elem,
        a_mons: &[Monomial],
        a_coeffs: &[F::Elem],
        beta: &F::Elem,
        shift: &Monomial,
        b_mons: &[Monomial],
        b_coeffs: &[F::Elem],
    ) -> Row<F::Elem> {
        let f = self.field;
        let scale_a = !f.is_one(alpha);
        let shifted = !shift.is_one();
        let nb = f.neg(beta);
        let mut mons = Vec::with_capacity(a_mons.len() + b_mons.len());
        let mut coeffs = Vec::with_capacity(a_mons.len() + b_mons.len());
        let (mut i, mut j) = (0, 0);
        let mut bm = b_mons.first().map(|m| if shifted { m.mul(shift) } else { m.clone() });
        while i < a_mons.len() || bm.is_some() {
            let ord = match &bm {
                None => std::cmp::Ordering::Less,
                Some(m) if i < a_mons.len() => self.order.cmp(&a_mons[i], m),
                Some(_) => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    mons.push(a_mons[i].clone());
                    coeffs.push(if scale_a { f.mul(alpha, &a_coeffs[i]) } else { a_coeffs[i].clone() });
                    i += 1;
                    continue;
                }
                std::cmp::Ordering::Greater => {
                    mons.push(bm.take().unwrap());
                    coeffs.push(f.mul(&nb, &b_coeffs[j]));
                }
                std::cmp::Ordering::Equal => {
                    let ca = if scale_a { f.mul(alpha, &a_coeffs[i]) } else { a_coeffs[i].clone() };
                    let c = f.add(&ca, &f.mul(&nb, &b_coeffs[j]));
                    let m = bm.take().unwrap();
                    if !f.is_zero(&c) {
                        mons.push(m);
                        coeffs.push(c);
                    }
                    i += 1;
                }
            }
            j += 1;
            bm = b_mons.get(j).map(|m| if shifted { m.mul(shift) } else { m.clone() });
        }
        Row { mons, coeffs }
    }

    /// Reduces `row` by the rows of `basis` listed in `active`.
    ///
    /// With `full` every term is reduced, otherwise only the leading one.
    /// With `exact` the basis rows must be monic and the result is the true
    /// remainder; otherwise it is a nonzero scalar multiple of it.
    fn reduce_by(
        &self,
        mut row: Row<F::Elem>,
        basis: &[&Row<F::Elem>],
        masks: &[u64],
        full: bool,
        exact: bool,
    ) -> Row<F::Elem> {
        let f = self.field;
        let mut top = row.mons.len();
        let mut steps = 0u32;
        while top > 0 {
            let i = top - 1;
            let m = &row.mons[i];
            let mmask = m.support_mask();
            let mut best: Option<usize> = None;
            for (k, g) in basis.iter().enumerate() {
                if masks[k] & !mmask != 0 || !g.lm().divides(m) {
                    continue;
                }
                if best.is_none_or(|b| g.mons.len() < basis[b].mons.len()) {
                    best = Some(k);
                }
            }
            let Some(k) = best else {
                if !full {
                    break;
                }
                top -= 1;
                continue;
            };
            let g = basis[k];
            let shift = g.lm().quotient_of(m).expect("divides");
            let (alpha, beta) = if exact {
                (f.one(), f.div(&row.coeffs[i], g.lc()).expect("nonzero"))
            } else {
                f.cancel_pair(&row.coeffs[i], g.lc())
            };
            let glen = g.mons.len() - 1;
            let lower = self.combine(
                &alpha,
                &row.mons[..i],
                &row.coeffs[..i],
                &beta,
                &shift,
                &g.mons[..glen],
                &g.coeffs[..glen],
            );
            let new_top = lower.mons.len();
            let mut mons = lower.mons;
            let mut coeffs = lower.coeffs;
            let scale = !f.is_one(&alpha);
            for t in i + 1..row.mons.len() {
                mons.push(std::mem::take(&mut row.mons[t]));
                coeffs.push(if scale { f.mul(&alpha, &row.coeffs[t]) } else { row.coeffs[t].clone() });
            }
            row = Row { mons, coeffs };
            top = new_top;
            steps += 1;
            if !exact && steps.is_multiple_of(4) && !row.is_empty() {
                f.normalize(&mut row.coeffs);
            }
        }
        row
    }

    pub fn row_from_terms<'t>(
        &self,
        terms: impl Iterator<Item = (&'t Monomial, &'t F::Elem)>,
    ) -> Row<F::Elem>
    where
        F::Elem: 't,
    {
        let mut v: Vec<(Monomial, F::Elem)> = terms.map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| self.order.cmp(&a.0, &b.0));
        let (mons, coeffs) = v.into_iter().unzip();
        Row { mons, coeffs }
    }

    /// Exact remainder of `row` modulo a reduced (monic) basis.
    pub fn normal_form(&self, row: Row<F::Elem>, basis: &[Row<F::Elem>]) -> Row<F::Elem> {
        let refs: Vec<&Row<F::Elem>> = basis.iter().collect();
        let masks: Vec<u64> = basis.iter().map(|g| g.lm().support_mask()).collect();
        self.reduce_by(row, &refs, &masks, true, true)
    }

    fn spoly(&self, a: &Row<F::Elem>, b: &Row<F::Elem>, lcm: &Monomial) -> Row<F::Elem> {
        let ua = a.lm().quotient_of(lcm).expect("lcm");
        let ub = b.lm().quotient_of(lcm).expect("lcm");
        let (alpha, beta) = self.field.cancel_pair(a.lc(), b.lc());
        let la = a.mons.len() - 1;
        let lb = b.mons.len() - 1;
        let a_sh: Vec<Monomial> = a.mons[..la].iter().map(|m| m.mul(&ua)).collect();
        self.combine(&alpha, &a_sh, &a.coeffs[..la], &beta, &ub, &b.mons[..lb], &b.coeffs[..lb])
    }

    /// Reduced Gröbner basis of the given rows, monic, sorted by leading monomial.
    pub fn groebner(&self, input: Vec<Row<F::Elem>>) -> Vec<Row<F::Elem>> {
        let f = self.field;
        let mut basis: Vec<Elt<F::Elem>> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();

        let mut input: Vec<Row<F::Elem>> = input.into_iter().filter(|r| !r.is_empty()).collect();
        input.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        let mut queue: Vec<(Row<F::Elem>, u32)> = input
            .into_iter()
            .map(|r| {
                let s = r.mons.iter().map(Monomial::degree).max().unwrap_or(0);
                (r, s)
            })
            .collect();
        queue.reverse();

        loop {
            let (row, sugar) = if let Some(x) = queue.pop() {
                x
            } else if !pairs.is_empty() {
                let k = (0..pairs.len())
                    .min_by(|&a, &b| {
                        pairs[a]
                            .sugar
                            .cmp(&pairs[b].sugar)
                            .then_with(|| self.order.cmp(&pairs[a].lcm, &pairs[b].lcm))
                    })
                    .unwrap();
                let p = pairs.swap_remove(k);
                let s = self.spoly(&basis[p.i].row, &basis[p.j].row, &p.lcm);
                (s, p.sugar)
            } else {
                break;
            };
            if row.is_empty() {
                continue;
            }
            let idx: Vec<usize> = (0..basis.len()).filter(|&k| active[k]).collect();
            let refs: Vec<&Row<F::Elem>> = idx.iter().map(|&k| &basis[k].row).collect();
            let masks: Vec<u64> = idx.iter().map(|&k| basis[k].mask).collect();
            let mut h = self.reduce_by(row, &refs, &masks, true, false);
            if h.is_empty() {
                continue;
            }
            f.normalize(&mut h.coeffs);
            if h.lm().is_one() {
                return vec![Row {
                    mons: vec![h.lm().clone()],
                    coeffs: vec![f.one()],
                }];
            }
            self.update(&mut basis, &mut active, &mut pairs, h, sugar);
        }

        // the active elements form a minimal basis; interreduce and make monic
        let idx: Vec<usize> = (0..basis.len()).filter(|&k| active[k]).collect();
        let mut out: Vec<Row<F::Elem>> = Vec::with_capacity(idx.len());
        for (pos, &k) in idx.iter().enumerate() {
            let others: Vec<&Row<F::Elem>> = idx
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != pos)
                .map(|(_, &o)| &basis[o].row)
                .collect();
            let masks: Vec<u64> = idx
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != pos)
                .map(|(_, &o)| basis[o].mask)
                .collect();
            let mut r = self.reduce_by(basis[k].row.clone(), &others, &masks, true, false);
            crate::field::make_monic(f, &mut r.coeffs);
            out.push(r);
        }
        out.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        out
    }

    fn update(
        &self,
        basis: &mut Vec<Elt<F::Elem>>,
        active: &mut Vec<bool>,
        pairs: &mut Vec<Pair>,
        h: Row<F::Elem>,
        sugar: u32,
    ) {
        let hn = basis.len();
        let hlm = h.lm().clone();
        let h_deg = hlm.degree();
        // candidate pairs (g, h)
        struct Cand {
            g: usize,
            lcm: Monomial,
            coprime: bool,
            sugar: u32,
        }
        let cands: Vec<Cand> = (0..hn)
            .filter(|&g| active[g])
            .map(|g| {
                let glm = basis[g].row.lm();
                let lcm = glm.lcm(&hlm);
                let s = (basis[g].sugar + lcm.degree() - glm.degree()).max(sugar + lcm.degree() - h_deg);
                Cand {
                    g,
                    coprime: glm.is_coprime(&hlm),
                    lcm,
                    sugar: s,
                }
            })
            .collect();
        let mut kept: Vec<usize> = Vec::new();
        for k in 0..cands.len() {
            let c = &cands[k];
            let dominated = !c.coprime
                && (cands[k + 1..].iter().any(|o| o.lcm.divides(&c.lcm))
                    || kept.iter().any(|&o| cands[o].lcm.divides(&c.lcm)));
            if !dominated {
                kept.push(k);
            }
        }
        // chain criterion on old pairs
        pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let li = basis[p.i].row.lm().lcm(&hlm);
            let lj = basis[p.j].row.lm().lcm(&hlm);
            li == p.lcm || lj == p.lcm
        });
        for k in kept {
            let c = &cands[k];
            if c.coprime {
                continue;
            }
            pairs.push(Pair {
                i: c.g,
                j: hn,
                lcm: c.lcm.clone(),
                sugar: c.sugar,
            });
        }
        for g in 0..hn {
            if active[g] && hlm.divides(basis[g].row.lm()) {
                active[g] = false;
            }
        }
        basis.push(Elt {
            mask: hlm.support_mask(),
            row: h,
            sugar,
        });
        active.push(true);
    }
}
