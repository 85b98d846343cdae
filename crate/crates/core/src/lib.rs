//! Exact commutative algebra for degrees of rational maps and multiplicities
//! of singular loci.
//!
//! Polynomials live over [`Rationals`] or a [`PrimeField`]. On top of the
//! Gröbner engine in [`gb`] sit ideal operations ([`Ideal`]), the residual
//! intersection algorithm for map degrees ([`vogel`]), Samuel multiplicities
//! ([`mult`]), numeric bounds on theta-divisor singularities ([`bounds`]) and
//! independent cross-checks ([`oracle`]).
//!
//! ```
//! use vcycle::{Ideal, Polynomial, Rationals, VarNames};
//!
//! let vars = VarNames::new(["x", "y"]);
//! let f = Polynomial::parse(Rationals, &vars, "x^2 - y^3").unwrap();
//! let g = Polynomial::parse(Rationals, &vars, "y^2").unwrap();
//! let j = Ideal::new(Rationals, 2, vec![f, g]).unwrap();
//! assert_eq!(j.colength().finite(), Some(4));
//! ```

pub mod bounds;
pub mod corpus;
pub mod error;
pub mod field;
pub mod gb;
pub mod ideals;
pub mod mult;
pub mod oracle;
pub mod poly;
pub mod problem;
pub mod vogel;

pub use error::{Error, Result};
pub use field::{Field, FieldKind, PrimeField, Rationals};
pub use gb::{Colength, GroebnerBasis, HilbertData};
pub use ideals::{generic_combinations, Ideal, Rng};
pub use poly::{Monomial, MonomialOrder, Polynomial, VarNames};

/// Library version, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(test)]
mod testutil;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/ideals.md")]
    mod ideals {}
    #[doc = include_str!("../../../book/src/map-degrees.md")]
    mod map_degrees {}
    #[doc = include_str!("../../../book/src/multiplicities.md")]
    mod multiplicities {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/problem-files.md")]
    mod problem_files {}
}
