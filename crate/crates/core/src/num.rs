//! High-precision real and complex helpers built on MPFR floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Default mantissa width, in bits, for every floating computation.
pub const DEFAULT_PRECISION: u32 = 128;

/// Smallest precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 64;

pub fn float(prec: u32, value: f64) -> Float {
    Float::with_val(prec, value)
}

pub fn float_from_rational(prec: u32, value: &Rational) -> Float {
    Float::with_val(prec, value)
}

pub fn float_from_integer(prec: u32, value: &Integer) -> Float {
    Float::with_val(prec, value)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Decimal digits needed to round-trip a float of `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 2
}

/// Scientific-notation rendering with as many digits as the precision carries.
pub fn format_float(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(decimal_digits(x.prec())))
}

/// Parses a decimal string produced by [`format_float`].
pub fn parse_float(prec: u32, text: &str) -> Option<Float> {
    Float::parse(text).ok().map(|p| Float::with_val(prec, p))
}

/// A complex number with MPFR real and imaginary parts of equal precision.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::real(Float::with_val(prec, 1))
    }

    pub fn real(re: Float) -> Self {
        let prec = re.prec();
        Self::new(re, Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self::new(float(prec, re), float(prec, im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(
            Float::with_val(prec, &self.re),
            Float::with_val(prec, &self.im),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(
            self.prec(),
            self.re.clone().square() + self.im.clone().square(),
        )
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &Float) -> Self {
        Self::new(
            Float::with_val(self.prec(), &self.re * k),
            Float::with_val(self.prec(), &self.im * k),
        )
    }

    pub fn recip(&self) -> Self {
        Complex::one(self.prec()) / self
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let modulus = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(prec));
        Self::new(
            Float::with_val(prec, &modulus * &c),
            Float::with_val(prec, &modulus * &s),
        )
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Complex::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `base^self` for a positive real base, as `exp(self * ln base)`.
    pub fn real_base_pow(&self, ln_base: &Float) -> Self {
        self.scale(ln_base).exp()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {:+}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        let re = self.re.to_f64();
        let im = self.im.to_f64();
        if im >= 0.0 {
            write!(f, "{re:.digits$} + {im:.digits$}i")
        } else {
            write!(f, "{re:.digits$} - {:.digits$}i", -im)
        }
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &'a Complex) -> Complex {
        let prec = self.prec();
        Complex::new(
            Float::with_val(prec, &self.re + &rhs.re),
            Float::with_val(prec, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &'a Complex) -> Complex {
        let prec = self.prec();
        Complex::new(
            Float::with_val(prec, &self.re - &rhs.re),
            Float::with_val(prec, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &'a Complex) -> Complex {
        let prec = self.prec();
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        Complex::new(ac - bd, ad + bc)
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &'a Complex) -> Complex {
        let prec = self.prec();
        let denom = rhs.norm_sqr();
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        Complex::new((ac + bd) / &denom, (bc - ad) / &denom)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &'a Complex) -> Complex {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Complex> for &'a Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                self.$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

/// `ln(1/r)` for `r = p^{-d}`, i.e. `d ln p`.
pub fn ln_inverse_ratio(prec: u32, prime: u64, d: u32) -> Float {
    Float::with_val(prec, prime).ln() * d
}

/// `x^n` for a real float and a signed integer exponent.
pub fn powi_float(x: &Float, n: i32) -> Float {
    Float::with_val(x.prec(), x.pow(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations_agree_with_f64() {
        let a = Complex::from_f64(128, 1.5, -2.0);
        let b = Complex::from_f64(128, -0.25, 0.75);
        let (re, im) = (&a * &b).to_f64_pair();
        assert!((re - (1.5 * -0.25 + 2.0 * 0.75)).abs() < 1e-15);
        assert!((im - (1.5 * 0.75 + 2.0 * 0.25)).abs() < 1e-15);
        let back = (&a * &b) / &b;
        assert!((back - &a).abs() < 1e-35);
    }

    #[test]
    fn exp_ln_round_trip() {
        let z = Complex::from_f64(128, -0.7, 2.9);
        let w = z.ln().exp();
        assert!((w - &z).abs() < 1e-35);
    }

    #[test]
    fn integer_power_matches_repeated_product() {
        let z = Complex::from_f64(128, 0.3, -1.1);
        let mut expected = Complex::one(128);
        for _ in 0..7 {
            expected = &expected * &z;
        }
        assert!((z.powi(7) - expected).abs() < 1e-35);
        assert_eq!(z.powi(0), Complex::one(128));
    }

    #[test]
    fn float_text_round_trips_at_full_precision() {
        let x = Float::with_val(128, 2).ln();
        let text = format_float(&x);
        assert_eq!(parse_float(128, &text).unwrap(), x);
    }
}
