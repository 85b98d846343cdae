//! Helpers shared by unit tests.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, Rationals};
use crate::poly::{Monomial, Polynomial, VarNames};

pub fn q(n: usize, s: &str) -> Polynomial<Rationals> {
    Polynomial::parse(Rationals, &VarNames::canonical(n), s).unwrap()
}

pub fn qs(n: usize, ss: &[&str]) -> Vec<Polynomial<Rationals>> {
    ss.iter().map(|s| q(n, s)).collect()
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Random polynomial with small integer coefficients.
pub fn random_poly<F: Field>(
    field: &F,
    rng: &mut ChaCha8Rng,
    nvars: usize,
    max_deg: u16,
    terms: usize,
    homogeneous: bool,
) -> Polynomial<F> {
    let mut out = Polynomial::zero(field.clone(), nvars);
    while out.is_zero() {
        for _ in 0..terms {
            let mut e = vec![0u16; nvars];
            let target = if homogeneous { max_deg } else { rng.gen_range(0..=max_deg) };
            for _ in 0..target {
                e[rng.gen_range(0..nvars)] += 1;
            }
            let c = field.from_i64(rng.gen_range(-5..=5));
            out = &out + &Polynomial::monomial(field.clone(), nvars, Monomial::from_exponents(&e), c);
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
