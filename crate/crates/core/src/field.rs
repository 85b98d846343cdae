//! Coefficient fields: exact rationals and word-size prime fields.
//!
//! Elements are plain values; the field object carries whatever context the
//! arithmetic needs (nothing for `Rationals`, the modulus for `PrimeField`).

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField`]; products of two residues fit in a `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

/// Default modulus for modular verification runs (the largest prime below 2^30).
pub const DEFAULT_PRIME: u64 = 1_073_741_789;

/// Runtime description of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldKind {
    Rationals,
    PrimeField { characteristic: u64 },
}

impl FieldKind {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Rationals => 0,
            FieldKind::PrimeField { characteristic } => *characteristic,
        }
    }
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "q"),
            FieldKind::PrimeField { characteristic } => write!(f, "fp:{characteristic}"),
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(FieldKind::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field spec `{s}`")))?;
            PrimeField::new(p)?;
            return Ok(FieldKind::PrimeField { characteristic: p });
        }
        if s == "fp" {
            return Ok(FieldKind::PrimeField {
                characteristic: DEFAULT_PRIME,
            });
        }
        Err(Error::Parse(format!("unknown field `{s}` (expected q or fp:<prime>)")))
    }
}

/// Arithmetic of a coefficient field.
///
/// Besides the field operations there are two hooks used by the Gröbner
/// engine: [`Field::cancel_pair`] and [`Field::normalize`]. Over the rationals
/// they implement fraction-free reduction on primitive integer polynomials;
/// over a prime field they make polynomials monic.
pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn kind(&self) -> FieldKind;

    fn characteristic(&self) -> u64 {
        self.kind().characteristic()
    }

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// The class of `num/den`; `None` when `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;

    /// Image of a rational number; `None` when its denominator vanishes.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem> {
        self.from_ratio(q.numer(), q.denom())
    }

    /// Canonical text form: `p/q` or an integer.
    fn format(&self, a: &Self::Elem) -> String;

    /// Returns `(alpha, beta)`, both nonzero, with `alpha * a == beta * b`.
    fn cancel_pair(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        (self.one(), self.div(a, b).expect("cancel_pair: zero divisor"))
    }

    /// Rescales a coefficient vector whose last entry is the leading one.
    fn normalize(&self, coeffs: &mut [Self::Elem]) {
        make_monic(self, coeffs)
    }
}

pub(crate) fn make_monic<F: Field>(field: &F, coeffs: &mut [F::Elem]) {
    let Some(lead) = coeffs.last() else { return };
    if field.is_one(lead) {
        return;
    }
    let inv = field.inv(lead).expect("leading coefficient is nonzero");
    for c in coeffs.iter_mut() {
        *c = field.mul(c, &inv);
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_integer() && b.is_integer() {
            return BigRational::from_integer(a.numer() + b.numer());
        }
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_integer() && b.is_integer() {
            return BigRational::from_integer(a.numer() - b.numer());
        }
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_integer() && b.is_integer() {
            return BigRational::from_integer(a.numer() * b.numer());
        }
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn cancel_pair(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        if a.is_integer() && b.is_integer() {
            let g = a.numer().gcd(b.numer());
            (
                BigRational::from_integer(b.numer() / &g),
                BigRational::from_integer(a.numer() / &g),
            )
        } else {
            (BigRational::one(), a / b)
        }
    }

    /// Clears denominators and content, leaving a primitive integer vector
    /// with positive leading entry.
    fn normalize(&self, coeffs: &mut [BigRational]) {
        let Some(lead) = coeffs.last() else { return };
        let negative = lead.is_negative();
        let mut den = BigInt::one();
        for c in coeffs.iter() {
            if !c.denom().is_one() {
                den = den.lcm(c.denom());
            }
        }
        let mut content = BigInt::zero();
        for c in coeffs.iter() {
            let n = if den.is_one() {
                c.numer().clone()
            } else {
                c.numer() * (&den / c.denom())
            };
            content = content.gcd(&n);
            if content.is_one() && den.is_one() {
                break;
            }
        }
        if content.is_zero() {
            return;
        }
        if negative {
            content = -content;
        }
        if den.is_one() && content.is_one() {
            return;
        }
        for c in coeffs.iter_mut() {
            let n = if den.is_one() {
                c.numer().clone()
            } else {
                c.numer() * (&den / c.denom())
            };
            *c = BigRational::from_integer(n / &content);
        }
    }
}

/// The prime field `Z/pZ` for an odd prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidInput(format!(
                "{p} is not an odd prime below {MAX_PRIME}"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn default_prime() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, n: i128) -> u64 {
        n.rem_euclid(self.p as i128) as u64
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::default_prime()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn kind(&self) -> FieldKind {
        FieldKind::PrimeField {
            characteristic: self.p,
        }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i128(n as i128)
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<u64> {
        let d = self.from_bigint(den);
        let n = self.from_bigint(num);
        self.inv(&d).map(|di| self.mul(&n, &di))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}
