//! Hilbert series of monomial ideals and the invariants read off from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::poly::Monomial;

/// Univariate integer polynomial in `t`, coefficient of `t^i` at index `i`.
type TPoly = Vec<BigInt>;

fn trim(p: &mut TPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn add_shifted(acc: &mut TPoly, p: &TPoly, shift: usize) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, BigInt::zero());
    }
    for (i, c) in p.iter().enumerate() {
        acc[i + shift] += c;
    }
}

/// Removes generators divisible by another one.
fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(Monomial::degree);
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|o| o.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator `K(t)` of the Hilbert series `K(t) / (1-t)^n` of `S / (gens)`.
pub(crate) fn numerator(gens: &[Monomial]) -> TPoly {
    knumerator(minimalize(gens.to_vec()))
}

fn knumerator(gens: Vec<Monomial>) -> TPoly {
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    if gens.iter().any(Monomial::is_one) {
        return Vec::new();
    }
    // pairwise coprime generators: product of (1 - t^deg)
    let mut union = 0u64;
    let mut coprime = gens[0].nvars() <= 64;
    for g in &gens {
        let m = g.support_mask();
        if union & m != 0 {
            coprime = false;
            break;
        }
        union |= m;
    }
    if coprime {
        let mut p: TPoly = vec![BigInt::one()];
        for g in &gens {
            let d = g.degree() as usize;
            let mut q = p.clone();
            q.resize(p.len() + d, BigInt::zero());
            for (i, c) in p.iter().enumerate() {
                q[i + d] -= c;
            }
            p = q;
        }
        trim(&mut p);
        return p;
    }
    // pivot on the variable occurring in the most non-linear generators
    let n = gens[0].nvars();
    let mut counts = vec![0usize; n];
    for g in &gens {
        if g.degree() > 1 {
            for (i, &e) in g.exponents().iter().enumerate() {
                if e > 0 {
                    counts[i] += 1;
                }
            }
        }
    }
    let var = (0..n).max_by_key(|&i| counts[i]).unwrap();
    let e = gens
        .iter()
        .filter(|g| g.degree() > 1)
        .map(|g| g.exponents()[var])
        .filter(|&e| e > 0)
        .min()
        .unwrap_or(1);
    let pivot = Monomial::var(n, var, e);

    let mut sum_gens: Vec<Monomial> = gens.iter().filter(|g| !pivot.divides(g)).cloned().collect();
    sum_gens.push(pivot.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut m = g.clone();
            let x = &mut m.exponents_mut()[var];
            *x = x.saturating_sub(e);
            m
        })
        .collect();
    let mut out = knumerator(minimalize(sum_gens));
    let rest = knumerator(minimalize(colon));
    add_shifted(&mut out, &rest, e as usize);
    trim(&mut out);
    out
}

/// Invariants of a graded quotient `S/I` read off its Hilbert series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    /// Projective dimension of `V(I)`; `-1` when `V(I)` is empty.
    pub dimension: i64,
    /// Degree of the top-dimensional part, counted with length; 0 when empty.
    pub degree: u64,
    /// Coefficients of the Hilbert polynomial, constant term first.
    #[serde(serialize_with = "ser_rationals")]
    pub hilbert_polynomial: Vec<BigRational>,
    /// Reduced numerator `Q(t)` with `HS(t) = Q(t) / (1-t)^(dimension+1)`.
    #[serde(serialize_with = "ser_ints")]
    pub numerator: Vec<BigInt>,
    /// Number of variables of the ambient polynomial ring.
    pub nvars: usize,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

fn binomial_poly(shift: i64, d: usize) -> Vec<BigRational> {
    // binom(s + shift, d) as a polynomial in s
    let mut p = vec![BigRational::one()];
    for k in 0..d as i64 {
        // multiply by (s + shift - k)
        let c = BigRational::from_integer(BigInt::from(shift - k));
        let mut q = vec![BigRational::zero(); p.len() + 1];
        for (i, a) in p.iter().enumerate() {
            q[i + 1] += a;
            q[i] += a * &c;
        }
        p = q;
    }
    let mut fact = BigInt::one();
    for k in 1..=d {
        fact *= k;
    }
    let f = BigRational::from_integer(fact);
    p.into_iter().map(|a| a / &f).collect()
}

impl HilbertData {
    pub(crate) fn from_leading_monomials(nvars: usize, lms: &[Monomial]) -> Self {
        let mut num = numerator(lms);
        if num.is_empty() {
            return HilbertData {
                dimension: -1,
                degree: 0,
                hilbert_polynomial: Vec::new(),
                numerator: Vec::new(),
                nvars,
            };
        }
        // divide by (1 - t) while t = 1 is a root
        let mut krull = nvars;
        while krull > 0 && num.iter().sum::<BigInt>().is_zero() {
            // synthetic division of num by (1 - t): q_i = sum_{k<=i} num_k
            let mut q = Vec::with_capacity(num.len() - 1);
            let mut acc = BigInt::zero();
            for c in &num[..num.len() - 1] {
                acc += c;
                q.push(acc.clone());
            }
            trim(&mut q);
            num = q;
            krull -= 1;
        }
        let deg_val: BigInt = num.iter().sum();
        let mut hp = Vec::new();
        if krull > 0 {
            let d = krull - 1;
            hp = vec![BigRational::zero(); d + 1];
            for (k, a) in num.iter().enumerate() {
                let b = binomial_poly(d as i64 - k as i64, d);
                let a = BigRational::from_integer(a.clone());
                for (i, c) in b.into_iter().enumerate() {
                    hp[i] += &a * c;
                }
            }
        }
        HilbertData {
            dimension: krull as i64 - 1,
            degree: if krull > 0 {
                deg_val.to_u64().expect("degree fits in u64")
            } else {
                0
            },
            hilbert_polynomial: hp,
            numerator: num,
            nvars,
        }
    }

    /// Krull dimension of `S/I` (the affine cone dimension).
    pub fn krull_dimension(&self) -> usize {
        (self.dimension + 1) as usize
    }

    /// `dim_k (S/I)` when `V(I)` is empty projectively, i.e. the affine cone is a point.
    pub fn length(&self) -> Option<u64> {
        if self.dimension == -1 {
            self.numerator.iter().sum::<BigInt>().to_u64()
        } else {
            None
        }
    }

    /// Value of the Hilbert polynomial at `s`.
    pub fn hilbert_polynomial_at(&self, s: i64) -> BigRational {
        let s = BigRational::from_integer(BigInt::from(s));
        self.hilbert_polynomial
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &s + c)
    }

    /// Arithmetic genus `(-1)^d (P(0) - 1)`.
    pub fn arithmetic_genus(&self) -> Option<BigInt> {
        if self.dimension < 0 {
            return None;
        }
        let v = self.hilbert_polynomial_at(0) - BigRational::one();
        let v = if self.dimension % 2 == 1 { -v } else { v };
        v.is_integer().then(|| v.to_integer())
    }

    /// Value of the Hilbert function in degree `s`.
    pub fn hilbert_function(&self, s: usize) -> BigInt {
        // coefficient of t^s in Q(t) / (1-t)^k
        let k = self.krull_dimension();
        let mut acc = BigInt::zero();
        for (i, a) in self.numerator.iter().enumerate() {
            if i > s {
                break;
            }
            let m = s - i;
            let c = if k == 0 {
                BigInt::from(u8::from(m == 0))
            } else {
                binom(m + k - 1, k - 1)
            };
            acc += a * c;
        }
        acc
    }
}

fn binom(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
