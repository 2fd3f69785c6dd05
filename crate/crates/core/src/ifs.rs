//! Self-similar strings generated by affine contractions of `Z_p`.
//!
//! A system `{x -> a_j x + b_j}` with pairwise disjoint images and total ratio
//! below one leaves a finite set of gaps (generators) in the first generation.
//! The string is the union of all images of those gaps under finite words, so
//! every interval length is an integer power of `r = p^{-d}`.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{IfsError, PadicError};
use crate::padic::{
    ball_relation, canonical_decomposition, haar_measure, padic_valuation, residue_mod, subdivide,
    BallRelation, PAdicBall, Prime, Valuation,
};

/// Parses `"num/den"` or a plain integer.
pub fn parse_rational(text: &str) -> Result<Rational, IfsError> {
    let t = text.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n
                .trim()
                .parse()
                .map_err(|_| IfsError::RationalSyntax(t.into()))?;
            let d: Integer = d
                .trim()
                .parse()
                .map_err(|_| IfsError::RationalSyntax(t.into()))?;
            if d == 0 {
                return Err(IfsError::RationalSyntax(t.into()));
            }
            Rational::from((n, d))
        }
        None => Rational::from(
            t.parse::<Integer>()
                .map_err(|_| IfsError::RationalSyntax(t.into()))?,
        ),
    };
    Ok(parsed)
}

/// `x -> a x + b` on `Z_p` with `|a|_p < 1` and `b` in `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineContraction {
    a: Rational,
    b: Rational,
    prime: Prime,
    exponent: u32,
}

impl AffineContraction {
    pub fn new(prime: Prime, a: Rational, b: Rational) -> Result<Self, IfsError> {
        let exponent = match padic_valuation(&a, prime) {
            Valuation::Finite(v) if v >= 1 => v as u32,
            _ => {
                return Err(IfsError::NotContraction {
                    index: 1,
                    a: a.to_string(),
                })
            }
        };
        if matches!(padic_valuation(&b, prime), Valuation::Finite(v) if v < 0) {
            return Err(IfsError::TranslationNotIntegral {
                index: 1,
                b: b.to_string(),
            });
        }
        Ok(Self {
            a,
            b,
            prime,
            exponent,
        })
    }

    /// Convenience constructor from `"num/den"` strings.
    pub fn parse(prime: Prime, a: &str, b: &str) -> Result<Self, IfsError> {
        Self::new(prime, parse_rational(a)?, parse_rational(b)?)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// `n` with contraction ratio `p^{-n}`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        Rational::from(&self.a * x) + &self.b
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineContraction) -> AffineContraction {
        AffineContraction {
            a: Rational::from(&self.a * &inner.a),
            b: Rational::from(&self.a * &inner.b) + &self.b,
            prime: self.prime,
            exponent: self.exponent + inner.exponent,
        }
    }
}

impl std::fmt::Display for AffineContraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b == 0 {
            write!(f, "x -> {}x", self.a)
        } else {
            write!(f, "x -> {} + {}x", self.b, self.a)
        }
    }
}

/// `|a|_p = p^{-n}`.
pub fn contraction_ratio(f: &AffineContraction) -> Rational {
    f.prime.rational_pow(-i64::from(f.exponent))
}

/// Exact image of a ball under an affine contraction.
pub fn image_ball(f: &AffineContraction, b: &PAdicBall) -> Result<PAdicBall, PadicError> {
    if b.prime() != f.prime {
        return Err(PadicError::PrimeMismatch(f.prime.get(), b.prime().get()));
    }
    let level = b.level() + f.exponent;
    let modulus = f.prime.pow(level);
    let a = residue_mod(&f.a, f.prime, &modulus)?;
    let t = residue_mod(&f.b, f.prime, &modulus)?;
    let center = Integer::from(&a * b.center()) + t;
    Ok(PAdicBall::new(f.prime, level, center))
}

/// Exponent data `(p, d, n', m')` of a self-similar string. The zeta
/// function, complex dimensions and tube formulas depend only on this.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeData {
    prime: Prime,
    d: u32,
    scaling: Vec<u32>,
    gaps: Vec<u32>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl LatticeData {
    /// Builds lattice data from exponents measured in units of `d`. A common
    /// factor of the exponents is folded into `d`, so `(p, 1, [2, 4], [2])`
    /// becomes `(p, 2, [1, 2], [1])`.
    pub fn new(prime: Prime, d: u32, scaling: Vec<u32>, gaps: Vec<u32>) -> Result<Self, IfsError> {
        let invalid = |m: &str| Err(IfsError::InvalidLattice(m.to_string()));
        if d == 0 {
            return invalid("d must be positive");
        }
        if scaling.len() < 2 {
            return Err(IfsError::TooFewMaps(scaling.len()));
        }
        if gaps.is_empty() {
            return invalid("at least one gap exponent is required");
        }
        if scaling.iter().chain(&gaps).any(|&e| e == 0) {
            return invalid("exponents must be positive");
        }
        let g = scaling.iter().chain(&gaps).fold(0, |acc, &e| gcd(acc, e));
        let mut scaling: Vec<u32> = scaling.iter().map(|e| e / g).collect();
        let mut gaps: Vec<u32> = gaps.iter().map(|e| e / g).collect();
        scaling.sort_unstable();
        gaps.sort_unstable();
        let lattice = Self {
            prime,
            d: d * g,
            scaling,
            gaps,
        };

        let ratio_sum = lattice.ratio_sum();
        if ratio_sum >= 1 {
            return Err(IfsError::RatioSumTooLarge(ratio_sum.to_string()));
        }
        let total = ratio_sum + lattice.gap_sum();
        if total != 1 {
            return invalid(&format!("ratios and gaps sum to {total}, not 1"));
        }
        Ok(lattice)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `n'_1 <= ... <= n'_N`.
    pub fn scaled_scaling_exponents(&self) -> &[u32] {
        &self.scaling
    }

    /// `m'_1 <= ... <= m'_K`.
    pub fn scaled_gap_exponents(&self) -> &[u32] {
        &self.gaps
    }

    /// `n_j = d n'_j`.
    pub fn scaling_exponents(&self) -> Vec<u32> {
        self.scaling.iter().map(|e| e * self.d).collect()
    }

    /// `m_k = d m'_k`.
    pub fn gap_exponents(&self) -> Vec<u32> {
        self.gaps.iter().map(|e| e * self.d).collect()
    }

    /// The multiplicative generator `r = p^{-d}`.
    pub fn r(&self) -> Rational {
        self.prime.rational_pow(-i64::from(self.d))
    }

    /// `r^m` exactly.
    pub fn r_pow(&self, m: u32) -> Rational {
        self.prime.rational_pow(-i64::from(self.d) * i64::from(m))
    }

    pub fn ratio_sum(&self) -> Rational {
        self.scaling.iter().map(|&e| self.r_pow(e)).sum()
    }

    pub fn gap_sum(&self) -> Rational {
        self.gaps.iter().map(|&e| self.r_pow(e)).sum()
    }
}

/// A validated system of affine contractions together with its gaps and
/// lattice data. Maps are sorted by nonincreasing ratio, gaps by
/// nonincreasing measure.
#[derive(Clone, Debug)]
pub struct SelfSimilarSystem {
    maps: Vec<AffineContraction>,
    gaps: Vec<PAdicBall>,
    lattice: LatticeData,
}

impl SelfSimilarSystem {
    pub fn prime(&self) -> Prime {
        self.lattice.prime
    }

    pub fn maps(&self) -> &[AffineContraction] {
        &self.maps
    }

    pub fn gaps(&self) -> &[PAdicBall] {
        &self.gaps
    }

    /// `n_1 <= ... <= n_N`.
    pub fn scaling_exponents(&self) -> Vec<u32> {
        self.maps.iter().map(AffineContraction::exponent).collect()
    }

    /// `m_1 <= ... <= m_K`.
    pub fn gap_exponents(&self) -> Vec<u32> {
        self.gaps.iter().map(PAdicBall::level).collect()
    }

    pub fn d(&self) -> u32 {
        self.lattice.d
    }

    pub fn r(&self) -> Rational {
        self.lattice.r()
    }

    pub fn lattice(&self) -> &LatticeData {
        &self.lattice
    }
}

fn check_maps(maps: &[AffineContraction]) -> Result<Prime, IfsError> {
    if maps.len() < 2 {
        return Err(IfsError::TooFewMaps(maps.len()));
    }
    let prime = maps[0].prime;
    if let Some(other) = maps.iter().find(|f| f.prime != prime) {
        return Err(IfsError::MixedPrimes(prime.get(), other.prime.get()));
    }
    let ratio_sum: Rational = maps.iter().map(contraction_ratio).sum();
    if ratio_sum >= 1 {
        return Err(IfsError::RatioSumTooLarge(ratio_sum.to_string()));
    }
    let unit = PAdicBall::unit(prime);
    let images = maps
        .iter()
        .map(|f| image_ball(f, &unit))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if ball_relation(&images[i], &images[j])? != BallRelation::Disjoint {
                return Err(IfsError::Overlap {
                    first: i + 1,
                    second: j + 1,
                    first_image: images[i].to_string(),
                    second_image: images[j].to_string(),
                });
            }
        }
    }
    Ok(prime)
}

/// Validates a system and derives gaps and lattice data. Map indices in
/// errors are 1-based positions in the input.
pub fn validate_system(maps: Vec<AffineContraction>) -> Result<SelfSimilarSystem, IfsError> {
    let prime = check_maps(&maps)?;
    let gaps = extract_gaps(&maps)?;
    let mut maps = maps;
    maps.sort_by_key(AffineContraction::exponent);
    let scaling = maps.iter().map(AffineContraction::exponent).collect();
    let gap_levels = gaps.iter().map(PAdicBall::level).collect();
    let lattice = LatticeData::new(prime, 1, scaling, gap_levels)?;
    Ok(SelfSimilarSystem {
        maps,
        gaps,
        lattice,
    })
}

/// Maximal balls of `Z_p` minus the images of `Z_p`, by recursive subdivision.
pub fn extract_gaps(maps: &[AffineContraction]) -> Result<Vec<PAdicBall>, IfsError> {
    let prime = check_maps(maps)?;
    let unit = PAdicBall::unit(prime);
    let images = maps
        .iter()
        .map(|f| image_ball(f, &unit))
        .collect::<Result<Vec<_>, _>>()?;
    let max_level = images.iter().map(PAdicBall::level).max().unwrap_or(0);

    let mut gaps = Vec::new();
    let mut stack = vec![unit];
    while let Some(ball) = stack.pop() {
        let mut touches = false;
        let mut covered = false;
        for image in &images {
            match ball_relation(&ball, image)? {
                BallRelation::Disjoint => {}
                BallRelation::Equal | BallRelation::FirstInsideSecond => {
                    covered = true;
                    break;
                }
                BallRelation::SecondInsideFirst => touches = true,
            }
        }
        if covered {
            continue;
        }
        if !touches {
            gaps.push(ball);
        } else if ball.level() < max_level {
            stack.extend(subdivide(&ball));
        }
    }
    let gaps = canonical_decomposition(&gaps)?;
    debug_assert!(gaps.iter().all(|g| g.level() <= max_level));
    Ok(gaps)
}

/// `c_1..c_M`: the number of intervals of length `r^m`, from the recurrence
/// `c_m = #{k : m'_k = m} + sum_j c_{m - n'_j}`.
pub fn length_counts(lattice: &LatticeData, max_m: usize) -> Vec<Integer> {
    let mut counts: Vec<Integer> = vec![Integer::new(); max_m + 1];
    for m in 1..=max_m {
        let mut c = Integer::from(lattice.gaps.iter().filter(|&&e| e as usize == m).count());
        for &n in &lattice.scaling {
            if let Some(prev) = m.checked_sub(n as usize) {
                c += &counts[prev];
            }
        }
        counts[m] = c;
    }
    counts.remove(0);
    counts
}

/// Word length that guarantees every interval of length `>= r^max_m` shows
/// up in [`enumerate_intervals`].
pub fn covering_depth(lattice: &LatticeData, max_m: usize) -> usize {
    let step = lattice.scaling[0] as usize;
    max_m.div_ceil(step)
}

/// All balls `Φ_w(G_k)` for words of length at most `max_word_length`, where
/// `Φ_w = Φ_{w_α} ∘ ... ∘ Φ_{w_1}`. Sorted by level, then center.
pub fn enumerate_intervals(sys: &SelfSimilarSystem, max_word_length: usize) -> Vec<PAdicBall> {
    let prime = sys.prime();
    let identity = AffineContraction {
        a: Rational::from(1),
        b: Rational::new(),
        prime,
        exponent: 0,
    };
    let mut words = vec![identity];
    let mut out = Vec::new();
    for depth in 0..=max_word_length {
        for w in &words {
            for g in &sys.gaps {
                out.push(image_ball(w, g).expect("validated maps are p-integral"));
            }
        }
        if depth < max_word_length {
            words = words
                .iter()
                .flat_map(|w| sys.maps.iter().map(move |f| f.compose(w)))
                .collect();
        }
    }
    out.sort_by(PAdicBall::canonical_cmp);
    out
}

/// The images `Φ_w(Z_p)` for all words of exactly `word_length` letters.
pub fn word_images(sys: &SelfSimilarSystem, word_length: usize) -> Vec<PAdicBall> {
    let prime = sys.prime();
    let unit = PAdicBall::unit(prime);
    let mut words = vec![AffineContraction {
        a: Rational::from(1),
        b: Rational::new(),
        prime,
        exponent: 0,
    }];
    for _ in 0..word_length {
        words = words
            .iter()
            .flat_map(|w| sys.maps.iter().map(move |f| f.compose(w)))
            .collect();
    }
    let mut out: Vec<PAdicBall> = words
        .iter()
        .map(|w| image_ball(w, &unit).expect("validated maps"))
        .collect();
    out.sort_by(PAdicBall::canonical_cmp);
    out
}

/// Total Haar measure of a list of (disjoint) balls.
pub fn total_measure(balls: &[PAdicBall]) -> Rational {
    balls.iter().map(haar_measure).sum()
}
