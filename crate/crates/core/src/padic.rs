//! Exact p-adic valuations and the algebra of balls `c + p^n Z_p` inside `Z_p`.
//!
//! Everything in this module is exact: measures are rationals, centers are
//! canonical residues, and no floating point is involved.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::PadicError;

/// A certified prime number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, PadicError> {
        if is_prime(p) {
            Ok(Self(p))
        } else {
            Err(PadicError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_integer(self) -> Integer {
        Integer::from(self.0)
    }

    /// `p^n` as an exact integer.
    pub fn pow(self, n: u32) -> Integer {
        Integer::from(self.0).pow(n)
    }

    /// `p^e` for any integer exponent, as an exact rational.
    pub fn rational_pow(self, e: i64) -> Rational {
        let magnitude = self.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Rational::from(magnitude)
        } else {
            Rational::from((1, magnitude))
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    // Primes handled here are tiny (they index residue tables), but the
    // constructor is public so fall back to a deterministic test for large n.
    if n > 1 << 32 {
        return Integer::from(n).is_probably_prime(40) != rug::integer::IsPrime::No;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// The p-adic valuation of a rational: a finite exponent, or `Infinity` for 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

fn integer_valuation(n: &Integer, p: Prime) -> i64 {
    let mut n = n.clone().abs();
    n.remove_factor_mut(&p.as_integer()) as i64
}

/// Exponent `v` with `x = p^v a/b`, `p` dividing neither `a` nor `b`.
pub fn padic_valuation(x: &Rational, p: Prime) -> Valuation {
    if *x.numer() == 0 {
        return Valuation::Infinity;
    }
    Valuation::Finite(integer_valuation(x.numer(), p) - integer_valuation(x.denom(), p))
}

/// `|x|_p = p^{-v}`, with `|0|_p = 0`.
pub fn padic_abs(x: &Rational, p: Prime) -> Rational {
    match padic_valuation(x, p) {
        Valuation::Infinity => Rational::new(),
        Valuation::Finite(v) => p.rational_pow(-v),
    }
}

/// Reduces a p-integral rational modulo `modulus` (a power of `p`).
pub fn residue_mod(x: &Rational, p: Prime, modulus: &Integer) -> Result<Integer, PadicError> {
    if x.denom().is_divisible(&p.as_integer()) {
        return Err(PadicError::NotIntegral(x.to_string()));
    }
    if *modulus == 1 {
        return Ok(Integer::new());
    }
    let inv = x
        .denom()
        .clone()
        .invert(modulus)
        .map_err(|_| PadicError::NotIntegral(x.to_string()))?;
    let mut r = Integer::from(x.numer() * &inv);
    r.modulo_mut(modulus);
    Ok(r)
}

/// How two balls sit relative to each other. In an ultrametric space two balls
/// are either disjoint or nested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BallRelation {
    Disjoint,
    Equal,
    FirstInsideSecond,
    SecondInsideFirst,
}

/// The ball `center + p^level Z_p`, with `0 <= center < p^level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdicBall {
    prime: Prime,
    level: u32,
    center: Integer,
}

impl PAdicBall {
    /// Builds a ball, canonicalizing `center` modulo `p^level`.
    pub fn new(prime: Prime, level: u32, center: impl Into<Integer>) -> Self {
        let mut center = center.into();
        center.modulo_mut(&prime.pow(level));
        Self {
            prime,
            level,
            center,
        }
    }

    /// The whole unit ball `Z_p`.
    pub fn unit(prime: Prime) -> Self {
        Self {
            prime,
            level: 0,
            center: Integer::new(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn center(&self) -> &Integer {
        &self.center
    }

    pub fn modulus(&self) -> Integer {
        self.prime.pow(self.level)
    }

    /// Whether `x` (a p-integral rational) lies in the ball.
    pub fn contains_point(&self, x: &Rational) -> Result<bool, PadicError> {
        Ok(residue_mod(x, self.prime, &self.modulus())? == self.center)
    }

    /// The unique ball one level up containing this one; `None` for `Z_p`.
    pub fn parent(&self) -> Option<Self> {
        (self.level > 0).then(|| Self::new(self.prime, self.level - 1, self.center.clone()))
    }

    /// Order used for deterministic output: by level, then center.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.center.cmp(&other.center))
    }
}

impl fmt::Display for PAdicBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}^{}Zp", self.center, self.prime, self.level)
    }
}

impl FromStr for PAdicBall {
    type Err = PadicError;

    /// Parses `c+p^nZp`; `Z_p` is accepted in place of `Zp` and `^1` may be omitted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PadicError::BallSyntax(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_suffix("Zp")
            .or_else(|| compact.strip_suffix("Z_p"))
            .ok_or_else(bad)?;
        let (center, power) = body.split_once('+').ok_or_else(bad)?;
        let (p, n) = match power.split_once('^') {
            Some((p, n)) => (p, n),
            None => (power, "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        let center: Integer = center.parse().map_err(|_| bad())?;
        if center < 0 {
            return Err(bad());
        }
        Ok(PAdicBall::new(Prime::new(p)?, n, center))
    }
}

#[derive(Serialize, Deserialize)]
struct BallRepr {
    p: u64,
    level: u32,
    #[serde(with = "crate::serde_integer")]
    center: Integer,
}

impl Serialize for PAdicBall {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BallRepr {
            p: self.prime.get(),
            level: self.level,
            center: self.center.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicBall {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = BallRepr::deserialize(d)?;
        let prime = Prime::new(repr.p).map_err(serde::de::Error::custom)?;
        if repr.center < 0 || repr.center >= prime.pow(repr.level) {
            return Err(serde::de::Error::custom(format!(
                "center {} out of range for level {}",
                repr.center, repr.level
            )));
        }
        Ok(PAdicBall::new(prime, repr.level, repr.center))
    }
}

pub fn ball_relation(b1: &PAdicBall, b2: &PAdicBall) -> Result<BallRelation, PadicError> {
    if b1.prime != b2.prime {
        return Err(PadicError::PrimeMismatch(b1.prime.get(), b2.prime.get()));
    }
    let coarse = b1.level.min(b2.level);
    let modulus = b1.prime.pow(coarse);
    let r1 = b1.center.clone() % &modulus;
    let r2 = b2.center.clone() % &modulus;
    if r1 != r2 {
        return Ok(BallRelation::Disjoint);
    }
    Ok(match b1.level.cmp(&b2.level) {
        Ordering::Equal => BallRelation::Equal,
        Ordering::Greater => BallRelation::FirstInsideSecond,
        Ordering::Less => BallRelation::SecondInsideFirst,
    })
}

/// `mu_H(c + p^n Z_p) = p^{-n}`.
pub fn haar_measure(b: &PAdicBall) -> Rational {
    b.prime.rational_pow(-i64::from(b.level))
}

/// Measure of the sphere `{x : |x - c|_p = p^{-n}}`: `p^{-n}(1 - 1/p)`.
pub fn sphere_measure(b: &PAdicBall) -> Rational {
    let p = b.prime.get();
    haar_measure(b) * Rational::from((p - 1, p))
}

/// The `p` children `c + k p^n + p^{n+1} Z_p`, ordered by center.
pub fn subdivide(b: &PAdicBall) -> Vec<PAdicBall> {
    let step = b.modulus();
    (0..b.prime.get())
        .map(|k| {
            let center = Integer::from(&step * k) + &b.center;
            PAdicBall {
                prime: b.prime,
                level: b.level + 1,
                center,
            }
        })
        .collect()
}

/// The convex components of a finite union of balls: nested balls are
/// absorbed and complete sibling families are merged into their parent until
/// nothing changes. Output is sorted by level, then center.
pub fn canonical_decomposition(balls: &[PAdicBall]) -> Result<Vec<PAdicBall>, PadicError> {
    let Some(first) = balls.first() else {
        return Ok(Vec::new());
    };
    let prime = first.prime;
    if let Some(other) = balls.iter().find(|b| b.prime != prime) {
        return Err(PadicError::PrimeMismatch(prime.get(), other.prime.get()));
    }

    let mut sorted: Vec<PAdicBall> = balls.to_vec();
    sorted.sort_by(PAdicBall::canonical_cmp);
    sorted.dedup();

    let mut current = absorb(sorted)?;
    loop {
        let merged = coalesce_siblings(&current);
        if merged.len() == current.len() {
            break;
        }
        current = absorb(merged)?;
    }
    current.sort_by(PAdicBall::canonical_cmp);
    Ok(current)
}

// Input must be sorted coarse-to-fine so that containers come first.
fn absorb(sorted: Vec<PAdicBall>) -> Result<Vec<PAdicBall>, PadicError> {
    let mut kept: Vec<PAdicBall> = Vec::with_capacity(sorted.len());
    for ball in sorted {
        let mut covered = false;
        for k in &kept {
            match ball_relation(&ball, k)? {
                BallRelation::Equal | BallRelation::FirstInsideSecond => {
                    covered = true;
                    break;
                }
                _ => {}
            }
        }
        if !covered {
            kept.push(ball);
        }
    }
    Ok(kept)
}

fn coalesce_siblings(balls: &[PAdicBall]) -> Vec<PAdicBall> {
    let Some(first) = balls.first() else {
        return Vec::new();
    };
    let p = first.prime.get() as usize;
    let mut families: BTreeMap<(u32, Integer), Vec<&PAdicBall>> = BTreeMap::new();
    let mut out = Vec::new();
    for b in balls {
        match b.parent() {
            Some(parent) => families
                .entry((parent.level, parent.center))
                .or_default()
                .push(b),
            None => out.push(b.clone()),
        }
    }
    for ((level, center), children) in families {
        if children.len() == p {
            out.push(PAdicBall {
                prime: first.prime,
                level,
                center,
            });
        } else {
            out.extend(children.into_iter().cloned());
        }
    }
    out.sort_by(PAdicBall::canonical_cmp);
    out
}
