//! Dense polynomials with arbitrary-size integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};

use crate::num::Complex;

/// `coefficients[i]` is the coefficient of `z^i`. Trailing zeros are trimmed,
/// so the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coefficients: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<Integer>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `c z^k`.
    pub fn monomial(k: usize, c: Integer) -> Self {
        let mut coefficients = vec![Integer::new(); k + 1];
        coefficients[k] = c;
        Self::new(coefficients)
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// True for constants, including zero.
    pub fn is_constant(&self) -> bool {
        self.coefficients.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coefficients.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coefficients.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Integer::from(c * i as u64))
                .collect(),
        )
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coefficients.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coefficients.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coefficients.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = z.prec();
        let mut acc = Complex::zero(prec);
        for c in self.coefficients.iter().rev() {
            acc = &acc * z;
            acc.re += c;
        }
        acc
    }

    /// `(f(z), f'(z))` by a single Horner pass.
    pub fn eval_with_derivative(&self, z: &Complex) -> (Complex, Complex) {
        let prec = z.prec();
        let mut value = Complex::zero(prec);
        let mut slope = Complex::zero(prec);
        for c in self.coefficients.iter().rev() {
            slope = &(&slope * z) + &value;
            value = &value * z;
            value.re += c;
        }
        (value, slope)
    }

    pub fn max_abs_coeff(&self) -> Integer {
        self.coefficients
            .iter()
            .map(|c| c.clone().abs())
            .max()
            .unwrap_or_default()
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> Integer {
        self.coefficients
            .iter()
            .fold(Integer::new(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        let content = self.content();
        if content <= 1 {
            return self.clone();
        }
        Self::new(
            self.coefficients
                .iter()
                .map(|c| Integer::from(c.div_exact_ref(&content)))
                .collect(),
        )
    }

    fn shifted(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coefficients = vec![Integer::new(); k];
        coefficients.extend(self.coefficients.iter().cloned());
        Self { coefficients }
    }

    fn scaled(&self, k: &Integer) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .map(|c| Integer::from(c * k))
                .collect(),
        )
    }

    /// Remainder of `lc(b)^k · self` by `b`, kept over the integers.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero polynomial");
        let lb = b.leading().expect("nonzero").clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().expect("nonzero").clone();
            r = &r.scaled(&lb) - &b.scaled(&lr).shifted(dr - db);
        }
        r
    }

    /// Sign convention for gcds: positive constant term when it is nonzero,
    /// positive leading coefficient otherwise.
    fn normalize_sign(self) -> Self {
        let negative = match self.coefficients.first() {
            Some(c0) if !c0.is_zero() => *c0 < 0,
            _ => self.leading().is_some_and(|l| *l < 0),
        };
        if negative {
            -self
        } else {
            self
        }
    }

    /// Primitive greatest common divisor, via the primitive remainder sequence.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.is_constant() && !a.is_zero() {
            return Self::one();
        }
        a.normalize_sign()
    }

    /// `self / divisor` when the quotient has integer coefficients and the
    /// remainder vanishes.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        let ld = divisor.leading()?;
        let Some(dn) = self.degree() else {
            return Some(Self::zero());
        };
        if dn < dd {
            return None;
        }
        let mut rem = self.coefficients.clone();
        let mut quotient = vec![Integer::new(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let top = &rem[k + dd];
            if !top.is_divisible(ld) {
                return None;
            }
            let q = Integer::from(top.div_exact_ref(ld));
            for (j, c) in divisor.coefficients.iter().enumerate() {
                rem[k + j] -= Integer::from(&q * c);
            }
            quotient[k] = q;
        }
        rem.iter().all(|c| c.is_zero()).then(|| Self::new(quotient))
    }

    /// Yun's algorithm: pairwise coprime square-free factors `f_i` with
    /// `self = c · Π f_i^i`. Factors of degree zero are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(Self, u32)> {
        if self.is_constant() {
            return Vec::new();
        }
        let f = self.primitive_part();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).expect("gcd divides f");
        let c = fp.div_exact(&a0).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            let next_c = d.div_exact(&a).expect("gcd divides d");
            b = b.div_exact(&a).expect("gcd divides b");
            d = &next_c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Coefficients `q_0..q_{terms-1}` of `num/den` as a formal power series.
    /// Requires `den(0) = ±1` so the expansion stays integral.
    pub fn series_quotient(num: &Self, den: &Self, terms: usize) -> Option<Vec<Integer>> {
        let d0 = den.coeff(0);
        if d0 != 1 && d0 != -1 {
            return None;
        }
        let mut q: Vec<Integer> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut acc = num.coeff(k);
            for (j, dj) in den.coefficients.iter().enumerate().skip(1).take(k) {
                acc -= Integer::from(dj * &q[k - j]);
            }
            q.push(acc * &d0);
        }
        Some(q)
    }
}

impl<'a> Add<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &'a IntPolynomial) -> IntPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &'a IntPolynomial) -> IntPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &'a IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![Integer::new(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coefficients.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.clone().abs();
            let sign = if *c < 0 { "-" } else { "+" };
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, magnitude == 1) {
                (0, _) => write!(f, "{magnitude}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{magnitude}z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{magnitude}z^{i}")?,
            }
        }
        Ok(())
    }
}
