use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ideal is not homogeneous")]
    NonHomogeneous,

    #[error("singular matrix in linear substitution")]
    SingularMatrix,

    #[error("genericity failure after {attempts} attempts: {context}")]
    Genericity { attempts: usize, context: String },

    #[error("map is not dominant and generically finite: residual cycle empty at step {step} of {steps}")]
    NonDominant { step: usize, steps: usize },

    #[error("base locus is the whole variety (every section vanishes on X)")]
    BaseLocusEverything,

    #[error("center is not an isolated point of the scheme (infinite colength)")]
    NotIsolated,

    #[error("runs disagree: {0}")]
    Disagreement(String),

    #[error("iteration cap {cap} exceeded: {context}")]
    CapExceeded { cap: u32, context: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}
