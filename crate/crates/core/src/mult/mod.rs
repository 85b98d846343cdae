//! Local multiplicities: colength at a point, Samuel multiplicity by generic
//! reduction, the Hilbert–Samuel function, and orders of vanishing.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb::Colength;
use crate::ideals::{generic_combinations, Ideal, Rng, RESAMPLE_BUDGET};
use crate::poly::{Monomial, Polynomial};

/// Largest power of the maximal ideal tried by [`colength_at_point`].
pub const STABILIZATION_CAP: u32 = 64;

/// Default number of generic-reduction trials.
pub const DEFAULT_TRIALS: usize = 3;

/// Where the multiplicity is taken.
#[derive(Debug, Clone)]
pub enum Center<F: Field> {
    Point(Vec<F::Elem>),
    /// A linear (possibly affine) subvariety given by independent linear forms.
    Linear(Ideal<F>),
}

/// Samuel multiplicity of `target` in the local ring of `X = V(variety)` at `center`.
#[derive(Debug, Clone)]
pub struct MultiplicityQuery<F: Field> {
    pub variety: Ideal<F>,
    pub target: Vec<Polynomial<F>>,
    pub center: Center<F>,
    /// Dimension `d` of the local ring.
    pub local_dim: usize,
}

impl<F: Field> MultiplicityQuery<F> {
    pub fn new(
        variety: Ideal<F>,
        target: Vec<Polynomial<F>>,
        center: Center<F>,
        local_dim: usize,
    ) -> Result<Self> {
        let n = variety.nvars();
        let field = variety.field().clone();
        for t in &target {
            if t.nvars() != n || t.field() != &field {
                return Err(Error::RingMismatch("target generator outside the ambient ring".into()));
            }
        }
        match &center {
            Center::Point(p) => {
                if p.len() != n {
                    return Err(Error::InvalidInput(format!("center needs {n} coordinates")));
                }
                if let Some(t) = target.iter().find(|t| !field.is_zero(&t.evaluate(p))) {
                    return Err(Error::InvalidInput(format!("{t} does not vanish at the center")));
                }
            }
            Center::Linear(z) => {
                if z.nvars() != n {
                    return Err(Error::RingMismatch("center ideal outside the ambient ring".into()));
                }
                if z.generators().iter().any(|g| g.total_degree() != Some(1)) {
                    return Err(Error::InvalidInput("center ideal must be generated by linear forms".into()));
                }
                for t in &target {
                    if !z.contains(t)? {
                        return Err(Error::InvalidInput(format!("{t} does not vanish on the center")));
                    }
                }
            }
        }
        Ok(MultiplicityQuery {
            variety,
            target,
            center,
            local_dim,
        })
    }

    pub fn nvars(&self) -> usize {
        self.variety.nvars()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GenericReduction,
    HilbertSamuel,
    ClosedForm,
}

/// One generic draw and the colength it produced.
#[derive(Debug, Clone, Serialize)]
pub struct Trial {
    pub seed: u64,
    pub colength: Colength,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityResult {
    pub value: Colength,
    pub method: Method,
    pub seed: Option<u64>,
    pub trials: Vec<Trial>,
    /// Largest power of the maximal ideal used for localization.
    pub stabilization: u32,
}

impl MultiplicityResult {
    pub fn finite(&self) -> Option<u64> {
        self.value.finite()
    }
}

/// Moves `p` to the origin.
fn translate<F: Field>(j: &Ideal<F>, p: &[F::Elem]) -> Result<Ideal<F>> {
    let f = j.field();
    let n = j.nvars();
    if p.iter().all(|c| f.is_zero(c)) {
        return Ok(j.clone());
    }
    let id: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| (0..n).map(|k| if i == k { f.one() } else { f.zero() }).collect())
        .collect();
    j.substitute_linear(&id, p)
}

/// All monomials of total degree `d` in `n` variables.
pub(crate) fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u16, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(0, d as u16, &mut vec![0; n], &mut out);
    out
}

/// Whether the origin is an isolated point of `V(j)`: saturating by the
/// maximal ideal removes the origin exactly when no larger component passes
/// through it.
fn origin_is_isolated<F: Field>(j: &Ideal<F>) -> Result<bool> {
    let (s, _) = j.saturate(&Ideal::maximal(j.field().clone(), j.nvars()))?;
    Ok(s.generators().iter().any(|g| !j.field().is_zero(&g.constant_term())))
}

/// Length of the local ring of `V(j)` at `p`, with the power of the maximal
/// ideal at which it stabilized.
pub(crate) fn local_colength<F: Field>(j: &Ideal<F>, p: &[F::Elem]) -> Result<(Colength, u32)> {
    let f = j.field();
    let n = j.nvars();
    if p.len() != n {
        return Err(Error::InvalidInput(format!("point needs {n} coordinates")));
    }
    let jt = translate(j, p)?;
    if jt.generators().iter().any(|g| !f.is_zero(&g.constant_term())) {
        return Ok((Colength::Finite(0), 0));
    }
    if jt.is_zero() && n > 0 {
        return Ok((Colength::Infinite, 0));
    }
    if !origin_is_isolated(&jt)? {
        return Ok((Colength::Infinite, 0));
    }
    if jt.is_homogeneous() {
        // a cone with only the vertex: the global quotient is already local
        return Ok((jt.colength(), 0));
    }
    let base = jt.reduced();
    // length(A/m^N A) increases strictly until m^N A = 0 (Nakayama), so the
    // first repeat is the answer
    let mut n_pow = 1;
    let mut prev = colength_plus_power(&base, n_pow)?;
    while n_pow < STABILIZATION_CAP {
        n_pow += 1;
        let cur = colength_plus_power(&base, n_pow)?;
        if cur == prev {
            return Ok((Colength::Finite(cur), n_pow));
        }
        prev = cur;
    }
    Err(Error::CapExceeded {
        cap: STABILIZATION_CAP,
        context: "local colength did not stabilize".into(),
    })
}

fn colength_plus_power<F: Field>(j: &Ideal<F>, power: u32) -> Result<u64> {
    let f = j.field();
    let n = j.nvars();
    let mut gens: Vec<Polynomial<F>> = j
        .generators()
        .iter()
        .map(|g| g.truncate_below(power))
        .filter(|g| !g.is_zero())
        .collect();
    gens.extend(
        monomials_of_degree(n, power)
            .into_iter()
            .map(|m| Polynomial::monomial(f.clone(), n, m, f.one())),
    );
    let c = Ideal::new(f.clone(), n, gens)?.colength();
    c.finite()
        .ok_or_else(|| Error::InvalidInput("ideal plus a power of the maximal ideal has infinite colength".into()))
}

/// Length of `O_p / J` at a rational point `p`; `Infinite` if `p` lies on a
/// positive-dimensional component and `0` if `p ∉ V(J)`.
pub fn colength_at_point<F: Field>(j: &Ideal<F>, p: &[F::Elem]) -> Result<Colength> {
    Ok(local_colength(j, p)?.0)
}

fn point_of<F: Field>(q: &MultiplicityQuery<F>) -> Result<&[F::Elem]> {
    match &q.center {
        Center::Point(p) => Ok(p),
        Center::Linear(_) => Err(Error::InvalidInput(
            "positive-dimensional centers go through multiplicity_along_linear".into(),
        )),
    }
}

fn run_trial<F: Field>(q: &MultiplicityQuery<F>, p: &[F::Elem], mut rng: Rng) -> Result<(Trial, u32)> {
    let seed = rng.seed();
    let mut gens = q.variety.generators().to_vec();
    if q.local_dim > 0 {
        gens.extend(generic_combinations(&q.target, q.local_dim, &mut rng)?);
    }
    let j = Ideal::new(q.variety.field().clone(), q.nvars(), gens)?;
    let (colength, n) = local_colength(&j, p)?;
    Ok((Trial { seed, colength }, n))
}

/// Samuel multiplicity at a point by generic reduction: `e(q) = ℓ(R/(s_1..s_d))`
/// for generic combinations `s_i` of the generators of `q`.
///
/// Non-generic draws can only overestimate, so the minimum is reported once
/// at least two trials attain it.
pub fn samuel_multiplicity<F: Field>(
    q: &MultiplicityQuery<F>,
    rng: &Rng,
    trials: usize,
) -> Result<MultiplicityResult> {
    let p = point_of(q)?;
    let trials = trials.max(2);
    let mut done: Vec<(Trial, u32)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(q, p, rng.fork(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut next = trials as u64;
    loop {
        let min = done.iter().map(|(t, _)| t.colength).min().expect("at least two trials");
        let hits = done.iter().filter(|(t, _)| t.colength == min).count();
        if min.is_infinite() {
            return Err(Error::NotIsolated);
        }
        if hits >= 2 {
            let stabilization = done.iter().map(|(_, n)| *n).max().unwrap_or(0);
            return Ok(MultiplicityResult {
                value: min,
                method: Method::GenericReduction,
                seed: Some(rng.seed()),
                trials: done.into_iter().map(|(t, _)| t).collect(),
                stabilization,
            });
        }
        if next >= (trials + RESAMPLE_BUDGET) as u64 {
            return Err(Error::Disagreement(format!(
                "generic reduction trials never agreed on a minimum: {:?}",
                done.iter().map(|(t, _)| t.colength).collect::<Vec<_>>()
            )));
        }
        done.push(run_trial(q, p, rng.fork(next))?);
        next += 1;
    }
}

/// Samuel multiplicity from the Hilbert–Samuel function `h(t) = ℓ(R/q^t)`,
/// `t = 1..=max_t`, read off as the `d`-th difference of the polynomial tail.
pub fn hilbert_samuel_multiplicity<F: Field>(
    q: &MultiplicityQuery<F>,
    max_t: u32,
) -> Result<MultiplicityResult> {
    let p = point_of(q)?;
    let d = q.local_dim;
    if (max_t as usize) < d + 2 {
        return Err(Error::InvalidInput(format!(
            "need at least {} values of the Hilbert function",
            d + 2
        )));
    }
    let target = Ideal::new(q.variety.field().clone(), q.nvars(), q.target.clone())?;
    let mut h = Vec::with_capacity(max_t as usize);
    let mut stabilization = 0;
    for t in 1..=max_t {
        let j = q.variety.sum(&target.power(t)?)?;
        let (c, n) = local_colength(&j, p)?;
        let Colength::Finite(v) = c else {
            return Err(Error::NotIsolated);
        };
        stabilization = stabilization.max(n);
        h.push(i128::from(v as i64));
    }
    // finite differences of the tail
    let tail = &h[h.len() - (d + 2)..];
    let mut diffs = tail.to_vec();
    for _ in 0..d {
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    if diffs[0] != diffs[1] {
        return Err(Error::CapExceeded {
            cap: max_t,
            context: format!("Hilbert–Samuel function {h:?} is not yet polynomial"),
        });
    }
    let e = diffs[1];
    if e <= 0 {
        return Err(Error::Disagreement(format!("non-positive leading coefficient from {h:?}")));
    }
    Ok(MultiplicityResult {
        value: Colength::Finite(e as u64),
        method: Method::HilbertSamuel,
        seed: None,
        trials: Vec::new(),
        stabilization,
    })
}

/// Affine solution set of linear equations: a particular point and a basis
/// of directions. `None` if inconsistent.
#[allow(clippy::type_complexity)]
fn solve_linear<F: Field>(
    field: &F,
    n: usize,
    forms: &[Polynomial<F>],
) -> Option<(Vec<F::Elem>, Vec<Vec<F::Elem>>)> {
    // row: [a_1..a_n | -c] for a·x + c = 0
    let mut rows: Vec<Vec<F::Elem>> = forms
        .iter()
        .map(|g| {
            let mut r: Vec<F::Elem> = (0..n).map(|i| g.coefficient(&Monomial::var(n, i, 1))).collect();
            r.push(field.neg(&g.constant_term()));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(&rows[r][col]).expect("pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][col]) {
                let factor = rows[i][col].clone();
                for k in 0..=n {
                    let t = field.mul(&factor, &rows[r][k]);
                    rows[i][k] = field.sub(&rows[i][k], &t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !field.is_zero(&row[n])) {
        return None;
    }
    let mut particular = vec![field.zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); n];
            v[fc] = field.one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = field.neg(&rows[i][fc]);
            }
            v
        })
        .collect();
    Some((particular, basis))
}

/// Samuel multiplicity along a linear subvariety `Z`, by slicing with
/// `dim Z` generic hyperplanes through a random point of `Z`. Two slice
/// points must agree.
pub fn multiplicity_along_linear<F: Field>(
    q: &MultiplicityQuery<F>,
    rng: &Rng,
    trials: usize,
) -> Result<MultiplicityResult> {
    let z = match &q.center {
        Center::Point(_) => return samuel_multiplicity(q, rng, trials),
        Center::Linear(z) => z,
    };
    let f = q.variety.field();
    let n = q.nvars();
    let (base, dirs) = solve_linear(f, n, z.generators())
        .ok_or_else(|| Error::InvalidInput("center ideal is inconsistent".into()))?;
    if dirs.is_empty() {
        let pq = MultiplicityQuery {
            center: Center::Point(base),
            ..q.clone()
        };
        return samuel_multiplicity(&pq, rng, trials);
    }
    let slice_at = |mut r: Rng| -> Result<MultiplicityResult> {
        let mut point = base.clone();
        for v in &dirs {
            let c = f.from_i64(r.coefficient());
            for (x, vi) in point.iter_mut().zip(v) {
                *x = f.add(x, &f.mul(&c, vi));
            }
        }
        let mut gens = q.variety.generators().to_vec();
        for _ in 0..dirs.len() {
            let mut l = Polynomial::zero(f.clone(), n);
            for (i, pi) in point.iter().enumerate() {
                let c = f.from_i64(r.coefficient());
                let xi = &Polynomial::var(f.clone(), n, i) - &Polynomial::constant(f.clone(), n, pi.clone());
                l = &l + &xi.scale(&c);
            }
            gens.push(l);
        }
        let sliced = MultiplicityQuery {
            variety: Ideal::new(f.clone(), n, gens)?,
            target: q.target.clone(),
            center: Center::Point(point),
            local_dim: q.local_dim,
        };
        samuel_multiplicity(&sliced, &r.fork(0), trials)
    };
    let mut results: Vec<MultiplicityResult> = Vec::new();
    for i in 0..(2 + RESAMPLE_BUDGET as u64) {
        let res = slice_at(rng.fork(1000 + i))?;
        if let Some(prev) = results.iter().find(|r| r.value == res.value) {
            let mut out = prev.clone();
            out.trials.extend(res.trials);
            out.stabilization = out.stabilization.max(res.stabilization);
            out.seed = Some(rng.seed());
            return Ok(out);
        }
        results.push(res);
    }
    Err(Error::Disagreement(format!(
        "slice points disagree: {:?}",
        results.iter().map(|r| r.value).collect::<Vec<_>>()
    )))
}

/// Largest `t` with `f ∈ I_Z^t` (`0` if `f` does not vanish on `Z`).
pub fn order_along<F: Field>(f: &Polynomial<F>, iz: &Ideal<F>) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("order of vanishing"));
    }
    if iz.is_unit() {
        return Err(Error::InvalidInput("order along the empty set".into()));
    }
    let cap = f.total_degree().unwrap_or(0);
    let mut power = iz.clone();
    let mut t = 0;
    while power.contains(f)? {
        t += 1;
        if t > cap {
            // only possible when Z is not cut out by forms of positive degree
            return Err(Error::CapExceeded {
                cap,
                context: "order of vanishing exceeds the degree".into(),
            });
        }
        power = power.product(iz)?.reduced();
    }
    Ok(t)
}

/// Morse-type normal form `x1² + … + x_r² + x_g^ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalModel {
    pub g: usize,
    pub hessian_rank: usize,
    pub ell: u32,
}

impl LocalModel {
    pub fn new(g: usize, ell: u32) -> Self {
        LocalModel {
            g,
            hessian_rank: g.saturating_sub(1),
            ell,
        }
    }

    fn check(&self) -> Result<()> {
        if self.g < 1 || self.ell < 2 {
            return Err(Error::InvalidInput("need g ≥ 1 and ℓ ≥ 2".into()));
        }
        if self.hessian_rank + 1 < self.g {
            return Err(Error::Unsupported(format!(
                "Hessian rank {} below g - 1 = {}",
                self.hessian_rank,
                self.g - 1
            )));
        }
        if self.hessian_rank >= self.g {
            return Err(Error::InvalidInput("Hessian rank must be g - 1".into()));
        }
        Ok(())
    }

    /// The model polynomial in `g` variables.
    pub fn polynomial<F: Field>(&self, field: &F) -> Polynomial<F> {
        let g = self.g;
        let mut theta = Polynomial::var(field.clone(), g, g - 1).pow(self.ell);
        for i in 0..g - 1 {
            theta = &theta + &Polynomial::var(field.clone(), g, i).pow(2);
        }
        theta
    }

    /// Jacobian ideal of the model on the hypersurface it defines, at the origin.
    pub fn query<F: Field>(&self, field: &F) -> Result<MultiplicityQuery<F>> {
        self.check()?;
        let theta = self.polynomial(field);
        let partials = (0..self.g).map(|i| theta.differentiate(i)).collect();
        let x = Ideal::new(field.clone(), self.g, vec![theta])?;
        MultiplicityQuery::new(x, partials, Center::Point(vec![field.zero(); self.g]), self.g - 1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalModelReport {
    pub model: LocalModel,
    pub value: u64,
    pub verification: Option<MultiplicityResult>,
}

/// `e = ℓ` for the Morse-type model; with `verify`, also computed symbolically.
pub fn local_model_multiplicity<F: Field>(
    model: LocalModel,
    field: &F,
    verify: Option<&Rng>,
) -> Result<LocalModelReport> {
    model.check()?;
    let value = u64::from(model.ell);
    let verification = match verify {
        None => None,
        Some(rng) => {
            let r = samuel_multiplicity(&model.query(field)?, rng, DEFAULT_TRIALS)?;
            if r.finite() != Some(value) {
                return Err(Error::Disagreement(format!(
                    "closed form gives {value}, generic reduction gives {}",
                    r.value
                )));
            }
            Some(r)
        }
    };
    Ok(LocalModelReport {
        model,
        value,
        verification,
    })
}
