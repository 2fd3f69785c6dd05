//! Complex dimensions and zeros: roots of the reduced zeta polynomials,
//! their vertical lines in the `s`-plane, residues and Laurent principal parts.
//!
//! Roots are found per square-free factor with the Aberth–Ehrlich iteration
//! and polished by Newton steps in extended precision, so multiplicities come
//! from the exact factorization rather than from clustering floating roots.

use std::cmp::Ordering;

use rug::{Float, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::DimsError;
use crate::num::{self, Complex};
use crate::poly::IntPolynomial;
use crate::zeta::ZetaFunction;

/// Extra bits carried during root iteration.
const GUARD_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Pole,
    Zero,
}

/// A vertical line `{ω + i n p̂ : n ∈ Z}` of poles or zeros. The base point
/// has `Im ω ∈ [0, p̂)`, and `phase = Im ω / p̂`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionLine {
    pub base: Complex,
    pub z_root: Complex,
    pub multiplicity: u32,
    pub residue: Option<Complex>,
    pub kind: LineKind,
    pub phase: Float,
}

impl DimensionLine {
    pub fn is_real(&self) -> bool {
        self.phase.is_zero()
    }

    /// `ω + i n p̂`.
    pub fn point(&self, n: i64, period: &Float) -> Complex {
        let mut w = self.base.clone();
        w.im += Float::with_val(w.prec(), period * n);
        w
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionSet {
    lines: Vec<DimensionLine>,
    period: Float,
    kind: LineKind,
}

impl DimensionSet {
    /// Sorted by real part descending, then imaginary part ascending.
    pub fn lines(&self) -> &[DimensionLine] {
        &self.lines
    }

    pub fn period(&self) -> &Float {
        &self.period
    }

    pub fn kind(&self) -> LineKind {
        self.kind
    }

    pub fn precision(&self) -> u32 {
        self.period.prec()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Real part of the first line, when it is a real pole line.
    pub fn dimension(&self) -> Option<&Float> {
        self.lines
            .first()
            .filter(|l| self.kind == LineKind::Pole && l.is_real())
            .map(|l| &l.base.re)
    }

    /// Lines counted with multiplicity; equals the degree of the polynomial
    /// whose roots were taken.
    pub fn total_multiplicity(&self) -> u32 {
        self.lines.iter().map(|l| l.multiplicity).sum()
    }
}

/// Options for root finding.
#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    pub precision: u32,
    pub max_iterations: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            precision: num::DEFAULT_PRECISION,
            max_iterations: 200,
        }
    }
}

impl RootOptions {
    pub fn with_precision(precision: u32) -> Self {
        Self {
            precision,
            ..Self::default()
        }
    }
}

/// Relative residual accepted for a root of a polynomial at `prec` bits.
pub fn certification_tolerance(prec: u32) -> f64 {
    1e-25f64.max(2f64.powi(20 - prec as i32))
}

fn certify(f: &IntPolynomial, z: &Complex, prec: u32) -> bool {
    let deg = f.degree().unwrap_or(0) as i32;
    let modulus = z.abs().to_f64().max(1.0);
    let scale = f.max_abs_coeff().to_f64() * f64::from(deg.max(1)) * modulus.powi(deg);
    f.eval_complex(z).abs().to_f64() <= certification_tolerance(prec) * scale
}

/// Simple roots of a square-free polynomial, at `opts.precision` bits.
pub fn aberth_roots(f: &IntPolynomial, opts: RootOptions) -> Result<Vec<Complex>, DimsError> {
    let n = f.degree().filter(|&n| n > 0).ok_or(DimsError::Constant)?;
    let prec = opts.precision;
    let wp = prec + GUARD_BITS;
    let coeffs = f.coefficients();
    if n == 1 {
        let re = -Float::with_val(wp, &coeffs[0]) / &coeffs[1];
        return Ok(vec![Complex::real(Float::with_val(prec, re))]);
    }

    let lead = Float::with_val(wp, &coeffs[n]).abs();
    let tail = coeffs
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| Float::with_val(wp, c).abs());
    let radius = match tail {
        Some(t) if !t.is_zero() => (t / &lead).root(n as u32),
        _ => Float::with_val(wp, 1),
    };
    let two_pi = num::pi(wp) * 2u32;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = Float::with_val(wp, &two_pi * k as u32) / n as u32 + 0.7f64;
            let (s, c) = theta.sin_cos(Float::new(wp));
            Complex::new(
                Float::with_val(wp, &radius * &c),
                Float::with_val(wp, &radius * &s),
            )
        })
        .collect();

    let target = Float::with_val(wp, 1u32) >> (prec + 8);
    let one = Complex::one(wp);
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        let mut worst = Float::new(wp);
        for k in 0..n {
            let (v, dv) = f.eval_with_derivative(&z[k]);
            if v.is_zero() {
                continue;
            }
            let w = if dv.is_zero() { v } else { &v / &dv };
            let mut repulsion = Complex::zero(wp);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    repulsion = &repulsion + &(&z[k] - zj).recip();
                }
            }
            let step = &w / &(&one - &(&w * &repulsion));
            if !step.is_finite() {
                continue;
            }
            z[k] = &z[k] - &step;
            let size = z[k].abs().max(&Float::with_val(wp, 1e-300));
            let rel = step.abs() / size;
            if rel > worst {
                worst = rel;
            }
        }
        if worst < target {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(DimsError::NoConvergence {
            iterations: opts.max_iterations,
            partial: z.iter().map(|r| r.with_prec(prec)).collect(),
        });
    }

    for root in &mut z {
        for _ in 0..2 {
            let (v, dv) = f.eval_with_derivative(root);
            if v.is_zero() || dv.is_zero() {
                break;
            }
            *root = &*root - &(&v / &dv);
        }
        if !certify(f, root, prec) {
            return Err(DimsError::Uncertified(root.with_prec(prec)));
        }
    }
    Ok(tidy_roots(z, prec))
}

/// Snaps numerically real roots onto the axis and makes conjugate pairs exact.
fn tidy_roots(mut z: Vec<Complex>, prec: u32) -> Vec<Complex> {
    let snap = 1e-30f64.max(2f64.powi(20 - prec as i32));
    for root in &mut z {
        if root.im.clone().abs() < root.abs() * snap {
            root.im = Float::new(root.im.prec());
        }
    }
    let mut used = vec![false; z.len()];
    for i in 0..z.len() {
        if used[i] || !z[i].im.is_sign_positive() || z[i].im.is_zero() {
            continue;
        }
        let target = z[i].conj();
        let partner = (0..z.len())
            .filter(|&j| j != i && !used[j] && z[j].im.is_sign_negative() && !z[j].im.is_zero())
            .min_by(|&a, &b| {
                (&z[a] - &target)
                    .abs()
                    .partial_cmp(&(&z[b] - &target).abs())
                    .unwrap_or(Ordering::Equal)
            });
        if let Some(j) = partner {
            z[j] = target;
            used[i] = true;
            used[j] = true;
        }
    }
    z.into_iter().map(|r| r.with_prec(prec)).collect()
}

/// All nonzero roots of `f` with their multiplicities, from Yun's
/// square-free factorization. Factors of `z` are dropped.
pub fn polynomial_roots(
    f: &IntPolynomial,
    opts: RootOptions,
) -> Result<Vec<(Complex, u32)>, DimsError> {
    let shift = f.coefficients().iter().take_while(|c| c.is_zero()).count();
    let stripped = IntPolynomial::new(f.coefficients()[shift..].to_vec());
    let mut out = Vec::new();
    for (factor, multiplicity) in stripped.square_free_decomposition() {
        for root in aberth_roots(&factor, opts)? {
            out.push((root, multiplicity));
        }
    }
    Ok(out)
}

fn line_phase(z: &Complex) -> Float {
    let prec = z.prec();
    let turns = -z.arg() / (num::pi(prec) * 2u32);
    let mut phase = Float::with_val(prec, turns.fract_ref());
    if phase.is_sign_negative() && !phase.is_zero() {
        phase += 1u32;
    }
    if phase >= 1u32 {
        phase -= 1u32;
    }
    if phase.is_zero() {
        phase = Float::new(prec);
    }
    phase
}

/// Base point `ω` of the line of solutions of `r^s = z`, with `Im ω ∈ [0, p̂)`.
pub fn map_root_to_line(z: &Complex, r: &Rational, period: &Float) -> Result<Complex, DimsError> {
    if z.is_zero() {
        return Err(DimsError::ZeroRoot);
    }
    let prec = z.prec();
    let ln_r = Float::with_val(prec, r).ln();
    let re = z.abs().ln() / &ln_r;
    let im = Float::with_val(prec, &line_phase(z) * period);
    Ok(Complex::new(re, im))
}

fn sort_lines(lines: &mut [DimensionLine]) {
    lines.sort_by(|a, b| {
        b.base
            .re
            .partial_cmp(&a.base.re)
            .unwrap_or(Ordering::Equal)
            .then(a.base.im.partial_cmp(&b.base.im).unwrap_or(Ordering::Equal))
    });
}

fn lines_from_roots(
    zf: &ZetaFunction,
    roots: Vec<(Complex, u32)>,
    kind: LineKind,
    prec: u32,
) -> Result<DimensionSet, DimsError> {
    let period = zf.period(prec);
    let r = zf.r();
    let mut lines = Vec::with_capacity(roots.len());
    for (z, multiplicity) in roots {
        let base = map_root_to_line(&z, &r, &period)?;
        let phase = line_phase(&z);
        let mut line = DimensionLine {
            base,
            z_root: z,
            multiplicity,
            residue: None,
            kind,
            phase,
        };
        if kind == LineKind::Pole && multiplicity == 1 {
            line.residue = Some(residue_at(zf, &line)?);
        }
        lines.push(line);
    }
    sort_lines(&mut lines);
    Ok(DimensionSet {
        lines,
        period,
        kind,
    })
}

/// Poles of `ζ`: the lines coming from roots of the reduced denominator.
pub fn complex_dimensions(zf: &ZetaFunction, opts: RootOptions) -> Result<DimensionSet, DimsError> {
    if zf.reduced_denominator().is_constant() {
        return Err(DimsError::Constant);
    }
    let roots = polynomial_roots(zf.reduced_denominator(), opts)?;
    lines_from_roots(zf, roots, LineKind::Pole, opts.precision)
}

/// Zeros of `ζ`: lines from the nonzero roots of the reduced numerator.
pub fn zeros_of_zeta(zf: &ZetaFunction, opts: RootOptions) -> Result<DimensionSet, DimsError> {
    let roots = polynomial_roots(zf.reduced_numerator(), opts)?;
    lines_from_roots(zf, roots, LineKind::Zero, opts.precision)
}

/// Residue of `ζ` at any point of a simple pole line. Uses the closed
/// form `Σ z^{m'_k} / (ln(1/r) Σ n'_j z^{n'_j})` when no factor was cancelled,
/// and `N(z) / (ln r · z · Q'(z))` on the reduced pair otherwise.
pub fn residue_at(zf: &ZetaFunction, line: &DimensionLine) -> Result<Complex, DimsError> {
    if line.kind != LineKind::Pole {
        return Err(DimsError::NotPole);
    }
    if line.multiplicity != 1 {
        return Err(DimsError::NotSimple(line.multiplicity));
    }
    let prec = line.z_root.prec();
    let wp = prec + GUARD_BITS;
    let z = line.z_root.with_prec(wp);
    let ln_r = zf.ln_r(wp);
    let closed_form = match (zf.scaled_scaling_exponents(), zf.scaled_gap_exponents()) {
        (Some(n), Some(m)) if !zf.has_cancellation() => Some((n, m)),
        _ => None,
    };
    let value = if let Some((n, m)) = closed_form {
        let mut top = Complex::zero(wp);
        for &mk in &m {
            top = &top + &z.powi(mk);
        }
        let mut bottom = Complex::zero(wp);
        for &nj in &n {
            bottom = &bottom + &z.powi(nj).scale(&Float::with_val(wp, nj));
        }
        &top / &bottom.scale(&Float::with_val(wp, -&ln_r))
    } else {
        let top = zf.reduced_numerator().eval_complex(&z);
        let slope = zf.reduced_denominator().derivative().eval_complex(&z);
        &top / &(&z * &slope).scale(&ln_r)
    };
    Ok(value.with_prec(prec))
}

/// Taylor coefficients in `h = s − ω` of `f(z0 · e^{h ln r})`, orders `0..order`.
fn jet(f: &IntPolynomial, z0: &Complex, ln_r: &Float, order: usize) -> Vec<Complex> {
    let wp = z0.prec();
    let mut out = vec![Complex::zero(wp); order];
    let mut zj = Complex::one(wp);
    for (j, c) in f.coefficients().iter().enumerate() {
        if !c.is_zero() {
            let mut term = zj.scale(&Float::with_val(wp, c));
            let rate = Float::with_val(wp, ln_r * j as u32);
            for (k, slot) in out.iter_mut().enumerate() {
                *slot = &*slot + &term;
                term = term
                    .scale(&rate)
                    .scale(&(Float::with_val(wp, 1) / (k as u32 + 1)));
            }
        }
        zj = &zj * z0;
    }
    out
}

/// Laurent coefficients `a_{−M}, a_{−M+1}, …` of `ζ` at a pole line, `count` of
/// them, where `M` is the line multiplicity. They do not depend on the point
/// of the line.
pub fn laurent_coefficients(
    zf: &ZetaFunction,
    line: &DimensionLine,
    count: usize,
) -> Result<Vec<Complex>, DimsError> {
    if line.kind != LineKind::Pole {
        return Err(DimsError::NotPole);
    }
    let m = line.multiplicity as usize;
    let prec = line.z_root.prec();
    let wp = prec + GUARD_BITS;
    let z0 = line.z_root.with_prec(wp);
    let ln_r = zf.ln_r(wp);
    let top = jet(zf.reduced_numerator(), &z0, &ln_r, count);
    let bottom = jet(zf.reduced_denominator(), &z0, &ln_r, count + m);
    let shifted = &bottom[m..];
    let mut a: Vec<Complex> = Vec::with_capacity(count);
    for i in 0..count {
        let mut acc = top[i].clone();
        for l in 1..=i {
            acc = &acc - &(&shifted[l] * &a[i - l]);
        }
        a.push(&acc / &shifted[0]);
    }
    Ok(a.into_iter().map(|c| c.with_prec(prec)).collect())
}

/// Principal part `a_{−M}..a_{−1}` of `ζ` at a pole line.
pub fn principal_part(zf: &ZetaFunction, line: &DimensionLine) -> Result<Vec<Complex>, DimsError> {
    laurent_coefficients(zf, line, line.multiplicity as usize)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineRepr {
    re: String,
    im: String,
    multiplicity: u32,
    residue_re: Option<String>,
    residue_im: Option<String>,
    kind: LineKind,
    z_re: String,
    z_im: String,
    phase: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetRepr {
    kind: LineKind,
    precision_bits: u32,
    period: String,
    #[serde(rename = "D")]
    dimension: Option<String>,
    lines: Vec<LineRepr>,
}

impl Serialize for DimensionSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let f = num::format_float;
        SetRepr {
            kind: self.kind,
            precision_bits: self.precision(),
            period: f(&self.period),
            dimension: self.dimension().map(f),
            lines: self
                .lines
                .iter()
                .map(|l| LineRepr {
                    re: f(&l.base.re),
                    im: f(&l.base.im),
                    multiplicity: l.multiplicity,
                    residue_re: l.residue.as_ref().map(|c| f(&c.re)),
                    residue_im: l.residue.as_ref().map(|c| f(&c.im)),
                    kind: l.kind,
                    z_re: f(&l.z_root.re),
                    z_im: f(&l.z_root.im),
                    phase: f(&l.phase),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DimensionSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SetRepr::deserialize(d)?;
        let prec = repr.precision_bits;
        let parse = |t: &str| {
            num::parse_float(prec, t).ok_or_else(|| D::Error::custom(format!("bad number {t:?}")))
        };
        let mut lines = Vec::with_capacity(repr.lines.len());
        for l in &repr.lines {
            let residue = match (&l.residue_re, &l.residue_im) {
                (Some(re), Some(im)) => Some(Complex::new(parse(re)?, parse(im)?)),
                (None, None) => None,
                _ => return Err(D::Error::custom("residue needs both parts")),
            };
            lines.push(DimensionLine {
                base: Complex::new(parse(&l.re)?, parse(&l.im)?),
                z_root: Complex::new(parse(&l.z_re)?, parse(&l.z_im)?),
                multiplicity: l.multiplicity,
                residue,
                kind: l.kind,
                phase: parse(&l.phase)?,
            });
        }
        Ok(DimensionSet {
            lines,
            period: parse(&repr.period)?,
            kind: repr.kind,
        })
    }
}
