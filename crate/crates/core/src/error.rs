use thiserror::Error;

use crate::num::Complex;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("balls over different primes ({0} and {1}) cannot be compared")]
    PrimeMismatch(u64, u64),
    #[error("{0} is not a p-adic integer (denominator divisible by p)")]
    NotIntegral(String),
    #[error("cannot parse ball {0:?}; expected the form c+p^nZp")]
    BallSyntax(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IfsError {
    #[error("a self-similar system needs at least two maps, got {0}")]
    TooFewMaps(usize),
    #[error("maps are defined over different primes ({0} and {1})")]
    MixedPrimes(u64, u64),
    #[error("map {index}: scaling coefficient {a} is not a strict contraction (need |a|_p < 1)")]
    NotContraction { index: usize, a: String },
    #[error("map {index}: translation {b} does not lie in Z_p")]
    TranslationNotIntegral { index: usize, b: String },
    #[error("scaling ratios sum to {0}, which is not < 1")]
    RatioSumTooLarge(String),
    #[error("maps {first} and {second} have overlapping images {first_image} and {second_image}")]
    Overlap {
        first: usize,
        second: usize,
        first_image: String,
        second_image: String,
    },
    #[error("invalid lattice data: {0}")]
    InvalidLattice(String),
    #[error("cannot parse rational {0:?}; expected an integer or num/den")]
    RationalSyntax(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ZetaError {
    #[error("s lies on a pole of the zeta function (|denominator| = {magnitude:e})")]
    Pole { magnitude: f64 },
    #[error("zeta evaluation overflowed at s = {0:?}")]
    Overflow(Complex),
    #[error("invalid zeta function: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DimsError {
    #[error("root iteration did not converge after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        partial: Vec<Complex>,
    },
    #[error("root {0:?} failed residual certification")]
    Uncertified(Complex),
    #[error("z = 0 does not correspond to any point s")]
    ZeroRoot,
    #[error("line has multiplicity {0}; use principal_part for the Laurent coefficients")]
    NotSimple(u32),
    #[error("line is a zero, not a pole")]
    NotPole,
    #[error("polynomial has degree 0, nothing to solve")]
    Constant,
}

/// Crate-wide error, one variant per module.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("padic: {0}")]
    Padic(#[from] PadicError),
    #[error("ifs: {0}")]
    Ifs(#[from] IfsError),
    #[error("zeta: {0}")]
    Zeta(#[from] ZetaError),
    #[error("dims: {0}")]
    Dims(#[from] DimsError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
