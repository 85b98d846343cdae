//! Vogel's intersection algorithm for rational maps given by linear systems.
//!
//! Each step cuts the current residual scheme with a generic section of the
//! system, then saturates by the base locus. Cycles stay as saturated ideals
//! and only their top-dimensional degrees are read off.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::ideals::{random_combination, Ideal, Rng, RESAMPLE_BUDGET};
use crate::poly::Polynomial;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 2024;

/// A variety `X ⊆ P^N` with a linear system `W` of forms of degree `e`.
#[derive(Debug, Clone)]
pub struct VogelProblem<F: Field> {
    variety: Ideal<F>,
    system: Vec<Polynomial<F>>,
    twist: u32,
    seed: u64,
}

impl<F: Field> VogelProblem<F> {
    /// `variety` lives in `N + 1` homogeneous coordinates.
    pub fn new(variety: Ideal<F>, system: Vec<Polynomial<F>>, seed: u64) -> Result<Self> {
        if !variety.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        let system: Vec<_> = system.into_iter().filter(|s| !s.is_zero()).collect();
        let Some(first) = system.first() else {
            return Err(Error::InvalidInput("empty linear system".into()));
        };
        let e = first.total_degree().unwrap_or(0);
        for s in &system {
            if s.nvars() != variety.nvars() || s.field() != variety.field() {
                return Err(Error::RingMismatch("system form outside the ambient ring".into()));
            }
            if !s.is_homogeneous() || s.total_degree() != Some(e) {
                return Err(Error::InvalidInput(format!(
                    "system forms must all be homogeneous of degree {e}: {s}"
                )));
            }
        }
        if e == 0 {
            return Err(Error::InvalidInput("system of constants".into()));
        }
        Ok(VogelProblem {
            variety,
            system,
            twist: e,
            seed,
        })
    }

    pub fn variety(&self) -> &Ideal<F> {
        &self.variety
    }

    pub fn system(&self) -> &[Polynomial<F>] {
        &self.system
    }

    /// Degree `e` of the forms, so that `L = O(e)|_X`.
    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        VogelProblem {
            seed,
            ..self.clone()
        }
    }

    pub fn nvars(&self) -> usize {
        self.variety.nvars()
    }

    /// `(dim X, deg X)`.
    pub fn variety_invariants(&self) -> Result<(usize, u64)> {
        let h = self.variety.hilbert()?;
        if h.dimension < 0 {
            return Err(Error::InvalidInput("the variety is empty".into()));
        }
        Ok((h.dimension as usize, h.degree))
    }

    /// `deg_X L = e^n · deg X`.
    pub fn degree_of_l(&self) -> Result<u64> {
        let (n, d) = self.variety_invariants()?;
        Ok(u64::from(self.twist).pow(n as u32) * d)
    }
}

impl VogelProblem<Rationals> {
    /// The same problem over `F_p`; `None` if a coefficient does not reduce.
    pub fn reduce_mod(&self, p: &PrimeField) -> Option<VogelProblem<PrimeField>> {
        Some(VogelProblem {
            variety: self.variety.reduce_mod(p)?,
            system: self
                .system
                .iter()
                .map(|s| s.reduce_mod(p))
                .collect::<Option<Vec<_>>>()?,
            twist: self.twist,
            seed: self.seed,
        })
    }
}

/// Scheme-theoretic base locus: `(I_X + W) : m^∞` for the irrelevant ideal `m`.
pub fn base_locus<F: Field>(p: &VogelProblem<F>) -> Result<Ideal<F>> {
    let gb = p.variety.gb();
    let mut all_in = true;
    for s in &p.system {
        if !gb.contains(s)? {
            all_in = false;
            break;
        }
    }
    if all_in {
        return Err(Error::BaseLocusEverything);
    }
    let mut gens = p.variety.generators().to_vec();
    gens.extend(p.system.iter().cloned());
    let sum = Ideal::new(p.variety.field().clone(), p.nvars(), gens)?;
    let irrelevant = Ideal::maximal(p.variety.field().clone(), p.nvars());
    Ok(sum.saturate(&irrelevant)?.0)
}

/// One step `j` of the algorithm.
#[derive(Debug, Clone, Serialize)]
pub struct VogelStep<F: Field> {
    pub step: usize,
    /// Coefficients of the chosen section in terms of the system.
    pub coefficients: Vec<i64>,
    /// Draws rejected by the dimension check.
    pub resamples: usize,
    /// Degree of the top-dimensional part of `R^{j-1} ∩ D_j`.
    pub intersection_degree: u64,
    pub residual_dimension: i64,
    pub residual_degree: u64,
    /// `deg_L V^j`.
    pub v_degree: u64,
    pub saturation_exponent: u32,
    /// Running discrepancy after this step.
    pub delta: u64,
    #[serde(skip)]
    pub residual: Ideal<F>,
}

/// Full record of a run.
#[derive(Debug, Clone, Serialize)]
pub struct VogelTrace<F: Field> {
    pub seed: u64,
    pub field: String,
    pub dimension: usize,
    pub twist: u32,
    pub degree_x_l: u64,
    pub steps: Vec<VogelStep<F>>,
    #[serde(skip)]
    pub base_locus: Ideal<F>,
}

impl<F: Field> VogelTrace<F> {
    /// `δ = Σ deg_L V^j`.
    pub fn discrepancy(&self) -> u64 {
        self.steps.iter().map(|s| s.v_degree).sum()
    }

    /// `deg_L V^j` for each step.
    pub fn v_degrees(&self) -> Vec<u64> {
        self.steps.iter().map(|s| s.v_degree).collect()
    }

    /// `deg_L R^n`, the number of residual points.
    pub fn residual_points(&self) -> u64 {
        self.steps.last().map_or(0, |s| s.residual_degree)
    }

    /// `deg_L R^j = deg_L R^{j-1} - deg_L V^j` at every step.
    pub fn check_bookkeeping(&self) -> bool {
        let e = u64::from(self.twist);
        let n = self.dimension as u32;
        let mut prev = self.degree_x_l;
        for s in &self.steps {
            let cur = e.pow(n - s.step as u32) * s.residual_degree;
            if prev.checked_sub(s.v_degree) != Some(cur) {
                return false;
            }
            prev = cur;
        }
        true
    }
}

/// Runs the algorithm with the problem's seed.
pub fn vogel_run<F: Field>(p: &VogelProblem<F>) -> Result<VogelTrace<F>> {
    let (n, deg_x) = p.variety_invariants()?;
    let e = u64::from(p.twist);
    let ib = base_locus(p)?;
    let mut rng = Rng::new(p.seed);
    let fld = p.variety.field().clone();
    let nv = p.nvars();
    let mut residual = p.variety.clone();
    let mut residual_degree = deg_x;
    let mut delta = 0;
    let mut steps = Vec::with_capacity(n);
    for j in 1..=n {
        let target = (n - j) as i64;
        let mut chosen = None;
        for attempt in 0..RESAMPLE_BUDGET {
            let (coefficients, s) = random_combination(&fld, nv, &p.system, &mut rng);
            let cut = residual.with(s)?;
            let h = cut.hilbert()?;
            if h.dimension == target {
                chosen = Some((coefficients, cut, h.degree, attempt));
                break;
            }
        }
        let Some((coefficients, cut, intersection_degree, resamples)) = chosen else {
            return Err(Error::Genericity {
                attempts: RESAMPLE_BUDGET,
                context: format!("no section at step {j} cut the residual in the expected dimension"),
            });
        };
        if intersection_degree != e * residual_degree {
            return Err(Error::Disagreement(format!(
                "step {j}: section meets the residual in degree {intersection_degree}, expected {}",
                e * residual_degree
            )));
        }
        let (next, saturation_exponent) = cut.saturate(&ib)?;
        let h = next.hilbert()?;
        if h.dimension != target {
            return Err(Error::NonDominant { step: j, steps: n });
        }
        let v_degree = e.pow((n - j) as u32) * (intersection_degree - h.degree);
        delta += v_degree;
        steps.push(VogelStep {
            step: j,
            coefficients,
            resamples,
            intersection_degree,
            residual_dimension: h.dimension,
            residual_degree: h.degree,
            v_degree,
            saturation_exponent,
            delta,
            residual: next.clone(),
        });
        residual = next;
        residual_degree = h.degree;
    }
    Ok(VogelTrace {
        seed: p.seed,
        field: fld.kind().to_string(),
        dimension: n,
        twist: p.twist,
        degree_x_l: e.pow(n as u32) * deg_x,
        steps,
        base_locus: ib,
    })
}

/// Discrepancy of a completed run.
pub fn discrepancy<F: Field>(t: &VogelTrace<F>) -> u64 {
    t.discrepancy()
}

/// Cross-checks recorded by [`map_degree`].
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub second_seed: u64,
    pub second_delta: u64,
    pub modulus: Option<u64>,
    pub modular_delta: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapDegreeReport {
    pub degree_x_l: u64,
    pub delta: u64,
    pub degree: u64,
    pub residual_points: u64,
    pub v_degrees: Vec<u64>,
    pub verification: Verification,
    #[serde(skip)]
    pub trace: VogelTrace<Rationals>,
}

/// Seed of the confirming run.
pub fn second_seed(seed: u64) -> u64 {
    Rng::new(seed).fork(1).seed()
}

/// Degree of the map, confirmed by a second seed and (unless `modulus` is
/// `None`) a run over `F_p`.
pub fn map_degree(p: &VogelProblem<Rationals>, modulus: Option<&PrimeField>) -> Result<MapDegreeReport> {
    let second = p.with_seed(second_seed(p.seed));
    let ((main, other), modular) = rayon::join(
        || rayon::join(|| vogel_run(p), || vogel_run(&second)),
        || {
            modulus.map(|fp| {
                let q = p.reduce_mod(fp).ok_or_else(|| {
                    Error::InvalidInput(format!("coefficients do not reduce mod {}", fp.modulus()))
                })?;
                vogel_run(&q)
            })
        },
    );
    let main = main?;
    let other = other?;
    let modular = modular.transpose()?;
    let delta = main.discrepancy();
    if other.discrepancy() != delta || other.v_degrees() != main.v_degrees() {
        return Err(Error::Disagreement(format!(
            "seed {} gives delta {}, seed {} gives {}",
            p.seed,
            delta,
            second.seed,
            other.discrepancy()
        )));
    }
    if let Some(m) = &modular {
        if m.discrepancy() != delta {
            return Err(Error::Disagreement(format!(
                "rational run gives delta {delta}, modular run gives {}",
                m.discrepancy()
            )));
        }
    }
    if !main.check_bookkeeping() || !other.check_bookkeeping() {
        return Err(Error::Disagreement("residual degree bookkeeping failed".into()));
    }
    let residual_points = main.residual_points();
    let degree = main
        .degree_x_l
        .checked_sub(delta)
        .ok_or_else(|| Error::Disagreement(format!("delta {delta} exceeds deg_X L")))?;
    if degree != residual_points {
        return Err(Error::Disagreement(format!(
            "deg_X L - delta = {degree} but the residual has {residual_points} points"
        )));
    }
    Ok(MapDegreeReport {
        degree_x_l: main.degree_x_l,
        delta,
        degree,
        residual_points,
        v_degrees: main.v_degrees(),
        verification: Verification {
            second_seed: second.seed,
            second_delta: other.discrepancy(),
            modulus: modulus.map(PrimeField::modulus),
            modular_delta: modular.as_ref().map(VogelTrace::discrepancy),
        },
        trace: main,
    })
}

#[cfg(test)]
mod tests;
