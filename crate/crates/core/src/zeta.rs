//! The geometric zeta function of a self-similar string as a rational
//! function of `z = r^s`.

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ZetaError;
use crate::ifs::LatticeData;
use crate::num::{self, Complex};
use crate::padic::Prime;
use crate::poly::IntPolynomial;

/// Default relative tolerance for the Moran bisection.
pub const MORAN_TOLERANCE: f64 = 1e-15;

/// `ζ(s) = N(z) / Q(z)` with `z = p^{-ds}`. Both the polynomials as built and
/// their coprime reduction are kept; roots and evaluation use the latter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaFunction {
    prime: Prime,
    d: u32,
    numerator: IntPolynomial,
    denominator: IntPolynomial,
    reduced_numerator: IntPolynomial,
    reduced_denominator: IntPolynomial,
    common_factor: IntPolynomial,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn exponent_polynomial(exponents: &[u32]) -> IntPolynomial {
    let degree = exponents.iter().copied().max().unwrap_or(0) as usize;
    let mut c = vec![Integer::new(); degree + 1];
    for &e in exponents {
        c[e as usize] += 1;
    }
    IntPolynomial::new(c)
}

impl ZetaFunction {
    /// Zeta function `Σ z^{m'_k} / (1 − Σ z^{n'_j})`. A common factor of all
    /// exponents is folded into `d`. No gap identity is required here.
    pub fn from_exponents(
        prime: Prime,
        d: u32,
        scaling: &[u32],
        gaps: &[u32],
    ) -> Result<Self, ZetaError> {
        if d == 0 {
            return Err(ZetaError::Invalid("d must be positive".into()));
        }
        if scaling.is_empty() || gaps.is_empty() {
            return Err(ZetaError::Invalid(
                "scaling and gap exponents must be nonempty".into(),
            ));
        }
        if scaling.iter().chain(gaps).any(|&e| e == 0) {
            return Err(ZetaError::Invalid("exponents must be positive".into()));
        }
        let g = scaling.iter().chain(gaps).fold(0, |acc, &e| gcd(acc, e));
        let scaling: Vec<u32> = scaling.iter().map(|e| e / g).collect();
        let gaps: Vec<u32> = gaps.iter().map(|e| e / g).collect();
        let numerator = exponent_polynomial(&gaps);
        let denominator = &IntPolynomial::one() - &exponent_polynomial(&scaling);
        Self::from_polynomials(prime, d * g, numerator, denominator)
    }

    /// Arbitrary `N(z)/Q(z)` with `Q(0) = 1`. Used to exercise code paths, such
    /// as multiple poles, that no self-similar string produces.
    pub fn from_polynomials(
        prime: Prime,
        d: u32,
        numerator: IntPolynomial,
        denominator: IntPolynomial,
    ) -> Result<Self, ZetaError> {
        if d == 0 {
            return Err(ZetaError::Invalid("d must be positive".into()));
        }
        if denominator.coeff(0) != 1 {
            return Err(ZetaError::Invalid(format!(
                "denominator {denominator} must have constant term 1"
            )));
        }
        if numerator.is_zero() {
            return Err(ZetaError::Invalid("numerator is identically zero".into()));
        }
        let common_factor = numerator.gcd(&denominator);
        let reduced_numerator = numerator
            .div_exact(&common_factor)
            .expect("gcd divides numerator");
        let reduced_denominator = denominator
            .div_exact(&common_factor)
            .expect("gcd divides denominator");
        Ok(Self {
            prime,
            d,
            numerator,
            denominator,
            reduced_numerator,
            reduced_denominator,
            common_factor,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `r = p^{-d}`.
    pub fn r(&self) -> Rational {
        self.prime.rational_pow(-i64::from(self.d))
    }

    /// `ln r = −d ln p`.
    pub fn ln_r(&self, prec: u32) -> Float {
        -num::ln_inverse_ratio(prec, self.prime.get(), self.d)
    }

    /// Oscillatory period `2π / (d ln p)`.
    pub fn period(&self, prec: u32) -> Float {
        num::pi(prec) * 2u32 / num::ln_inverse_ratio(prec, self.prime.get(), self.d)
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.denominator
    }

    pub fn reduced_numerator(&self) -> &IntPolynomial {
        &self.reduced_numerator
    }

    pub fn reduced_denominator(&self) -> &IntPolynomial {
        &self.reduced_denominator
    }

    /// The factor cancelled between numerator and denominator; `1` when none.
    pub fn common_factor(&self) -> &IntPolynomial {
        &self.common_factor
    }

    pub fn has_cancellation(&self) -> bool {
        !self.common_factor.is_constant()
    }

    /// `n'_j`, if the denominator has the form `1 − Σ z^{n'_j}`.
    pub fn scaled_scaling_exponents(&self) -> Option<Vec<u32>> {
        let mut out = Vec::new();
        for (i, c) in self.denominator.coefficients().iter().enumerate().skip(1) {
            if *c > 0 {
                return None;
            }
            let count = Integer::from(-c).to_u32()?;
            out.extend(std::iter::repeat_n(i as u32, count as usize));
        }
        (!out.is_empty()).then_some(out)
    }

    /// `m'_k`, if the numerator has nonnegative coefficients and no constant term.
    pub fn scaled_gap_exponents(&self) -> Option<Vec<u32>> {
        if !self.numerator.coeff(0).is_zero() {
            return None;
        }
        let mut out = Vec::new();
        for (i, c) in self.numerator.coefficients().iter().enumerate() {
            let count = c.to_u32()?;
            out.extend(std::iter::repeat_n(i as u32, count as usize));
        }
        Some(out)
    }

    /// `z = r^s`.
    pub fn z_of(&self, s: &Complex) -> Complex {
        s.real_base_pow(&self.ln_r(s.prec()))
    }
}

/// Builds the zeta function of a string from its lattice data.
pub fn build_zeta(lattice: &LatticeData) -> ZetaFunction {
    ZetaFunction::from_exponents(
        lattice.prime(),
        lattice.d(),
        lattice.scaled_scaling_exponents(),
        lattice.scaled_gap_exponents(),
    )
    .expect("lattice data is valid")
}

/// `ζ(s)` from the reduced form.
pub fn evaluate_zeta(zf: &ZetaFunction, s: &Complex) -> Result<Complex, ZetaError> {
    if !s.is_finite() {
        return Err(ZetaError::Overflow(s.clone()));
    }
    let z = zf.z_of(s);
    evaluate_at_z(zf, &z).map_err(|e| match e {
        ZetaError::Overflow(_) => ZetaError::Overflow(s.clone()),
        other => other,
    })
}

/// `N(z)/Q(z)` from the reduced form.
pub fn evaluate_at_z(zf: &ZetaFunction, z: &Complex) -> Result<Complex, ZetaError> {
    let n = zf.reduced_numerator.eval_complex(z);
    let q = zf.reduced_denominator.eval_complex(z);
    let qa = q.abs();
    let scale = n.abs().max(&Float::with_val(z.prec(), 1));
    if qa < scale * 1e-12f64 {
        return Err(ZetaError::Pole {
            magnitude: qa.to_f64(),
        });
    }
    let value = &n / &q;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ZetaError::Overflow(z.clone()))
    }
}

/// `ζ(1)`, exactly.
pub fn total_length(zf: &ZetaFunction) -> Result<Rational, ZetaError> {
    let r = zf.r();
    let q = zf.reduced_denominator.eval_rational(&r);
    if q == 0 {
        return Err(ZetaError::Pole { magnitude: 0.0 });
    }
    Ok(zf.reduced_numerator.eval_rational(&r) / q)
}

/// Power-series coefficients of `ζ` in `z`, for `z^1..z^M`.
pub fn series_coefficients(zf: &ZetaFunction, max_m: usize) -> Vec<Integer> {
    let mut q = IntPolynomial::series_quotient(&zf.numerator, &zf.denominator, max_m + 1)
        .expect("denominator has constant term 1");
    q.remove(0);
    q
}

/// The root `x*` in `(0, 1)` of `1 − Σ x^{n'_j}`, by bisection until the
/// bracket is below `rel_tol · x*`. A tolerance of zero bisects to the full
/// precision.
pub fn moran_root(zf: &ZetaFunction, prec: u32, rel_tol: f64) -> Result<Float, ZetaError> {
    let q = &zf.denominator;
    if zf.scaled_scaling_exponents().is_none() || q.eval_integer(&Integer::from(1)) >= 0 {
        return Err(ZetaError::Invalid(format!(
            "{q} has no Moran root in (0, 1)"
        )));
    }
    let mut lo = Float::new(prec);
    let mut hi = Float::with_val(prec, 1);
    for _ in 0..prec + 8 {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        if q.eval_float(&mid).is_sign_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
        if rel_tol > 0.0 && Float::with_val(prec, &hi - &lo) <= Float::with_val(prec, &lo * rel_tol)
        {
            break;
        }
    }
    Ok(Float::with_val(prec, &lo + &hi) / 2u32)
}

/// `D = ln x* / ln r`, the unique real solution of the Moran equation.
pub fn similarity_dimension(zf: &ZetaFunction, prec: u32) -> Result<Float, ZetaError> {
    similarity_dimension_with_tolerance(zf, prec, MORAN_TOLERANCE)
}

pub fn similarity_dimension_with_tolerance(
    zf: &ZetaFunction,
    prec: u32,
    rel_tol: f64,
) -> Result<Float, ZetaError> {
    let x = moran_root(zf, prec, rel_tol)?;
    Ok(x.ln() / zf.ln_r(prec))
}

/// Abscissa of convergence of the Dirichlet series; it coincides with `D`.
pub fn abscissa_of_convergence(zf: &ZetaFunction, prec: u32) -> Result<Float, ZetaError> {
    similarity_dimension(zf, prec)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZetaRepr {
    p: Prime,
    d: u32,
    #[serde(with = "crate::serde_integer::vec")]
    numerator: Vec<Integer>,
    #[serde(with = "crate::serde_integer::vec")]
    denominator: Vec<Integer>,
}

impl Serialize for ZetaFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ZetaRepr {
            p: self.prime,
            d: self.d,
            numerator: self.numerator.coefficients().to_vec(),
            denominator: self.denominator.coefficients().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZetaFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ZetaRepr::deserialize(d)?;
        ZetaFunction::from_polynomials(
            repr.p,
            repr.d,
            IntPolynomial::new(repr.numerator),
            IntPolynomial::new(repr.denominator),
        )
        .map_err(serde::de::Error::custom)
    }
}
