//! Inner tube volumes `V(ε)`: exactly from the length multiplicities, and
//! approximately from the explicit formula over the complex dimensions.

use rug::{Float, Rational};
use serde::Serialize;

use crate::dims::{laurent_coefficients, DimensionSet, LineKind};
use crate::error::DimsError;
use crate::ifs::{length_counts, LatticeData};
use crate::num::{self, Complex};
use crate::zeta::ZetaFunction;

/// Relative distance to a power of `r` below which `ε` counts as a breakpoint.
pub const BREAKPOINT_TOLERANCE: f64 = 1e-9;

/// `ζ(1)`, the total length, from the lattice data.
pub fn total_length(lattice: &LatticeData) -> Rational {
    lattice.gap_sum() / (Rational::from(1) - lattice.ratio_sum())
}

/// Largest `m ≥ 0` with `r^m ≥ ε`, or `0` when `ε > 1`.
pub fn level_of(lattice: &LatticeData, eps: &Rational) -> u32 {
    assert!(*eps > 0, "epsilon must be positive");
    if *eps >= 1 {
        return 0;
    }
    let step = f64::from(lattice.d()) * (lattice.prime().get() as f64).ln();
    let log_inv = {
        let (n, d) = (eps.numer(), eps.denom());
        (d.significant_bits() as f64 - n.significant_bits() as f64) * std::f64::consts::LN_2
    };
    let mut m = (log_inv / step).floor().max(0.0) as u32;
    while m > 0 && lattice.r_pow(m) < *eps {
        m -= 1;
    }
    while lattice.r_pow(m + 1) >= *eps {
        m += 1;
    }
    m
}

/// `V_0, …, V_M` with `V_m = V(r^m) = p^{-1}(ζ(1) − Σ_{k≤m} c_k r^k)`.
pub fn volume_levels(lattice: &LatticeData, max_m: u32) -> Vec<Rational> {
    let p_inv = lattice.prime().rational_pow(-1);
    let counts = length_counts(lattice, max_m as usize);
    let mut v = Rational::from(&p_inv * &total_length(lattice));
    let mut out = Vec::with_capacity(max_m as usize + 1);
    out.push(v.clone());
    for (k, c) in counts.iter().enumerate() {
        v -= Rational::from(&p_inv * &lattice.r_pow(k as u32 + 1)) * c;
        out.push(v.clone());
    }
    out
}

/// `V(r^m)`.
pub fn volume_at_level(lattice: &LatticeData, m: u32) -> Rational {
    volume_levels(lattice, m).pop().expect("nonempty")
}

/// Exact thin inner tube volume. `V` is constant on each `(r^{m+1}, r^m]`.
pub fn volume_direct(lattice: &LatticeData, eps: &Rational) -> Rational {
    volume_at_level(lattice, level_of(lattice, eps))
}

/// Haar measure of the metric boundary, `(1 − 1/p) ζ(1)`.
pub fn boundary_measure(lattice: &LatticeData) -> Rational {
    (Rational::from(1) - lattice.prime().rational_pow(-1)) * total_length(lattice)
}

/// Thick tube volume: thin volume plus the boundary.
pub fn thick_volume(lattice: &LatticeData, eps: &Rational) -> Rational {
    volume_direct(lattice, eps) + boundary_measure(lattice)
}

/// `g_K / r_N = p^{n_N − m_K}`; the explicit formula holds below it.
pub fn validity_threshold(lattice: &LatticeData) -> Rational {
    let n_max = *lattice.scaled_scaling_exponents().last().expect("N >= 2");
    let m_max = *lattice.scaled_gap_exponents().last().expect("K >= 1");
    lattice
        .prime()
        .rational_pow(i64::from(lattice.d()) * (i64::from(n_max) - i64::from(m_max)))
}

/// `x = log_{1/r}(1/ε)`.
pub fn log_coordinate(zf: &ZetaFunction, eps: &Float) -> Float {
    let prec = eps.prec();
    -Float::with_val(prec, eps.ln_ref()) / num::ln_inverse_ratio(prec, zf.prime().get(), zf.d())
}

/// Whether `ε` is within relative [`BREAKPOINT_TOLERANCE`] of some `r^m`.
pub fn is_breakpoint(zf: &ZetaFunction, eps: &Float) -> bool {
    let x = log_coordinate(zf, eps);
    let nearest = Float::with_val(x.prec(), x.round_ref());
    let offset = Float::with_val(x.prec(), &x - &nearest).abs();
    let step = num::ln_inverse_ratio(53, zf.prime().get(), zf.d()).to_f64();
    offset.to_f64() * step < BREAKPOINT_TOLERANCE
}

/// Index range `n_lo..=n_hi` of points `ω + i n p̂` on a line of the given
/// phase with `|Im| ≤ (N + 1/2) p̂`. The union over lines is closed under
/// conjugation.
pub fn truncation_range(phase: &Float, n: u32) -> (i64, i64) {
    let half = f64::from(n) + 0.5;
    let phase = phase.to_f64();
    ((-half - phase).ceil() as i64, (half - phase).floor() as i64)
}

#[derive(Clone, Debug)]
struct LineTerm {
    base: Complex,
    phase: Float,
    /// `a_{−M}, …, a_{−1}`.
    principal: Vec<Complex>,
}

impl LineTerm {
    fn multiplicity(&self) -> usize {
        self.principal.len()
    }
}

/// A real value obtained as the real part of a conjugate-closed complex sum,
/// with the discarded imaginary part kept for inspection.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSum {
    pub value: Float,
    pub imaginary_residual: Float,
}

impl RealSum {
    fn from_complex(c: Complex) -> Self {
        Self {
            value: c.re,
            imaginary_residual: c.im.abs(),
        }
    }
}

/// Leading single-line approximation and the spectral gap `δ = D − Re ω_2`
/// (`None` when there is only one line).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedVolume {
    pub leading: Float,
    pub gap: Option<Float>,
}

/// The explicit tube formula `V(ε) = Σ_ω res(p^{-1} ζ(s) ε^{1−s}/(1−s); ω)`,
/// prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub struct ExplicitFormula {
    prime: u64,
    ln_inv_r: Float,
    period: Float,
    lines: Vec<LineTerm>,
    prec: u32,
}

impl ExplicitFormula {
    pub fn new(zf: &ZetaFunction, dims: &DimensionSet) -> Result<Self, DimsError> {
        if dims.kind() != LineKind::Pole {
            return Err(DimsError::NotPole);
        }
        let prec = dims.precision();
        let wp = prec + 32;
        let lines = dims
            .lines()
            .iter()
            .map(|line| {
                let principal = match &line.residue {
                    Some(res) => vec![res.with_prec(wp)],
                    None => laurent_coefficients(zf, line, line.multiplicity as usize)?
                        .into_iter()
                        .map(|c| c.with_prec(wp))
                        .collect(),
                };
                Ok(LineTerm {
                    base: line.base.with_prec(wp),
                    phase: line.phase.clone(),
                    principal,
                })
            })
            .collect::<Result<Vec<_>, DimsError>>()?;
        Ok(Self {
            prime: zf.prime().get(),
            ln_inv_r: num::ln_inverse_ratio(wp, zf.prime().get(), zf.d()),
            period: Float::with_val(wp, dims.period()),
            lines,
            prec,
        })
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn wp(&self) -> u32 {
        self.prec + 32
    }

    /// One line's contribution at `ln ε`, stepping `ε^{−i n p̂}` by a phasor.
    fn line_sum(&self, line: &LineTerm, ln_eps: &Float, n: u32) -> Complex {
        let wp = self.wp();
        let (lo, hi) = truncation_range(&line.phase, n);
        let one = Complex::one(wp);
        let p_inv = Float::with_val(wp, 1) / self.prime;
        // ε^{1−ω_lo}
        let mut point = line.base.clone();
        point.im += Float::with_val(wp, &self.period * lo);
        let mut power = (&one - &point).scale(ln_eps).exp();
        let step_angle = Float::with_val(wp, -(&self.period * ln_eps.clone()));
        let (s, c) = step_angle.sin_cos(Float::new(wp));
        let phasor = Complex::new(c, s);
        let mut sum = Complex::zero(wp);
        let neg_l = Float::with_val(wp, -ln_eps);
        for k in lo..=hi {
            let gap = &one - &point;
            let weight = if line.multiplicity() == 1 {
                &line.principal[0] / &gap
            } else {
                multiple_pole_weight(&line.principal, &gap, &neg_l)
            };
            sum = &sum + &(&weight * &power);
            if k < hi {
                power = &power * &phasor;
                point.im += &self.period;
            }
        }
        sum.scale(&p_inv)
    }

    /// `V(ε)` from the lines truncated at `|Im ω| ≤ (N + 1/2) p̂`.
    pub fn volume(&self, eps: &Float, n: u32) -> RealSum {
        let ln_eps = Float::with_val(self.wp(), eps.ln_ref());
        let mut total = Complex::zero(self.wp());
        for line in &self.lines {
            total = &total + &self.line_sum(line, &ln_eps, n);
        }
        RealSum::from_complex(total.with_prec(self.prec))
    }

    /// `G_u(x) = res(ζ; ω_u)/p · Σ_n e^{2πinx} / (1 − ω_u − i n p̂)`. Real for
    /// real lines; for other lines `ε^{1−ω_u} G_u` pairs with the conjugate line.
    pub fn fourier_g(&self, u: usize, x: &Float, n: u32) -> Result<Complex, DimsError> {
        let line = &self.lines[u];
        if line.multiplicity() != 1 {
            return Err(DimsError::NotSimple(line.multiplicity() as u32));
        }
        let wp = self.wp();
        let (lo, hi) = truncation_range(&line.phase, n);
        let one = Complex::one(wp);
        let two_pi_x = Float::with_val(wp, num::pi(wp) * 2u32 * x);
        let (s, c) = Float::with_val(wp, &two_pi_x * lo).sin_cos(Float::new(wp));
        let mut power = Complex::new(c, s);
        let (s, c) = two_pi_x.sin_cos(Float::new(wp));
        let phasor = Complex::new(c, s);
        let mut point = line.base.clone();
        point.im += Float::with_val(wp, &self.period * lo);
        let mut sum = Complex::zero(wp);
        for k in lo..=hi {
            sum = &sum + &(&power / &(&one - &point));
            if k < hi {
                power = &power * &phasor;
                point.im += &self.period;
            }
        }
        let p_inv = Float::with_val(wp, 1) / self.prime;
        Ok((&sum * &line.principal[0])
            .scale(&p_inv)
            .with_prec(self.prec))
    }

    /// `Σ_u ε^{1−ω_u} G_u(log_{1/r} ε^{-1})`.
    pub fn volume_via_g(&self, eps: &Float, n: u32) -> Result<RealSum, DimsError> {
        let wp = self.wp();
        let eps = Float::with_val(wp, eps);
        let ln_eps = Float::with_val(wp, eps.ln_ref());
        let x = Float::with_val(wp, &ln_eps / &self.ln_inv_r) * -1i32;
        let one = Complex::one(wp);
        let mut total = Complex::zero(wp);
        for (u, line) in self.lines.iter().enumerate() {
            let g = self.fourier_g(u, &x, n)?.with_prec(wp);
            let amplitude = (&one - &line.base).scale(&ln_eps).exp();
            total = &total + &(&amplitude * &g);
        }
        Ok(RealSum::from_complex(total.with_prec(self.prec)))
    }

    /// `ε^{1−D} G_1(x)` and the gap to the next line.
    pub fn truncated(&self, eps: &Float, n: u32) -> Result<TruncatedVolume, DimsError> {
        let wp = self.wp();
        let first = self.lines.first().ok_or(DimsError::Constant)?;
        let ln_eps = Float::with_val(wp, eps.ln_ref());
        let x = Float::with_val(wp, &ln_eps / &self.ln_inv_r) * -1i32;
        let g = self.fourier_g(0, &x, n)?.with_prec(wp);
        let amplitude = (&Complex::one(wp) - &first.base).scale(&ln_eps).exp();
        let leading = (&amplitude * &g).re;
        let gap = self
            .lines
            .get(1)
            .map(|second| Float::with_val(self.prec, &first.base.re - &second.base.re));
        Ok(TruncatedVolume {
            leading: Float::with_val(self.prec, leading),
            gap,
        })
    }
}

/// `Σ_{k=1}^{M} a_{−k} [h^{k−1}] e^{−hL} / (1 − ω − h)` with `gap = 1 − ω` and
/// `neg_l = −L = −ln ε`.
fn multiple_pole_weight(principal: &[Complex], gap: &Complex, neg_l: &Float) -> Complex {
    let wp = gap.prec();
    let m = principal.len();
    let inv = gap.recip();
    // inv_pow[j] = (1 − ω)^{−(j+1)}
    let mut inv_pow = Vec::with_capacity(m);
    let mut acc = inv.clone();
    for _ in 0..m {
        inv_pow.push(acc.clone());
        acc = &acc * &inv;
    }
    // exp_coeff[i] = (−L)^i / i!
    let mut exp_coeff = Vec::with_capacity(m);
    let mut e = Float::with_val(wp, 1);
    for i in 0..m {
        exp_coeff.push(e.clone());
        e = e * neg_l / (i as u32 + 1);
    }
    let mut total = Complex::zero(wp);
    for k in 1..=m {
        let j = k - 1;
        let mut coeff = Complex::zero(wp);
        for i in 0..=j {
            coeff = &coeff + &inv_pow[j - i].scale(&exp_coeff[i]);
        }
        // principal[0] is a_{−M}
        total = &total + &(&principal[m - k] * &coeff);
    }
    total
}

/// Explicit-formula volume; see [`ExplicitFormula::volume`].
pub fn volume_explicit(
    zf: &ZetaFunction,
    dims: &DimensionSet,
    eps: &Float,
    n: u32,
) -> Result<RealSum, DimsError> {
    Ok(ExplicitFormula::new(zf, dims)?.volume(eps, n))
}

/// See [`ExplicitFormula::fourier_g`].
pub fn fourier_g(
    zf: &ZetaFunction,
    dims: &DimensionSet,
    u: usize,
    x: &Float,
    n: u32,
) -> Result<Complex, DimsError> {
    ExplicitFormula::new(zf, dims)?.fourier_g(u, x, n)
}

/// See [`ExplicitFormula::volume_via_g`].
pub fn volume_via_g(
    zf: &ZetaFunction,
    dims: &DimensionSet,
    eps: &Float,
    n: u32,
) -> Result<RealSum, DimsError> {
    ExplicitFormula::new(zf, dims)?.volume_via_g(eps, n)
}

/// See [`ExplicitFormula::truncated`].
pub fn truncated_volume(
    zf: &ZetaFunction,
    dims: &DimensionSet,
    eps: &Float,
    n: u32,
) -> Result<TruncatedVolume, DimsError> {
    ExplicitFormula::new(zf, dims)?.truncated(eps, n)
}

/// One row of a tube sweep.
#[derive(Clone, Debug, Serialize)]
pub struct TubeReport {
    #[serde(serialize_with = "ser_float")]
    pub epsilon: Float,
    #[serde(serialize_with = "ser_rational")]
    pub v_direct: Rational,
    #[serde(serialize_with = "ser_float")]
    pub v_explicit: Float,
    pub truncation: u32,
    #[serde(serialize_with = "ser_float")]
    pub discrepancy: Float,
    pub breakpoint_flag: bool,
    pub in_validity_range: bool,
    #[serde(serialize_with = "ser_float")]
    pub imaginary_residual: Float,
    #[serde(serialize_with = "ser_float")]
    pub leading_term: Float,
    /// `ε^{−(1−D)} V_direct`.
    #[serde(serialize_with = "ser_float")]
    pub normalized: Float,
}

fn ser_float<S: serde::Serializer>(x: &Float, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&num::format_float(x))
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Compares the exact and explicit volumes at `ε`.
pub fn tube_report(
    lattice: &LatticeData,
    zf: &ZetaFunction,
    formula: &ExplicitFormula,
    dimension: &Float,
    eps: &Rational,
    n: u32,
) -> Result<TubeReport, DimsError> {
    let prec = formula.precision();
    let eps_f = Float::with_val(prec, eps);
    let v_direct = volume_direct(lattice, eps);
    let explicit = formula.volume(&eps_f, n);
    let direct_f = Float::with_val(prec, &v_direct);
    let discrepancy = Float::with_val(prec, &explicit.value - &direct_f).abs();
    let leading = formula.truncated(&eps_f, n)?.leading;
    let one_minus_d = Float::with_val(prec, 1u32 - dimension);
    let ln_eps = Float::with_val(prec, eps_f.ln_ref());
    let normalized = direct_f * Float::with_val(prec, -(one_minus_d * ln_eps)).exp();
    Ok(TubeReport {
        breakpoint_flag: is_breakpoint(zf, &eps_f),
        in_validity_range: *eps < validity_threshold(lattice),
        epsilon: eps_f,
        v_direct,
        v_explicit: explicit.value,
        truncation: n,
        discrepancy,
        imaginary_residual: explicit.imaginary_residual,
        leading_term: leading,
        normalized,
    })
}

/// Log-uniform grid of `points` values from `min` to `max`, ascending.
pub fn log_uniform_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(
        min > 0.0 && min <= max && points >= 1,
        "invalid epsilon grid"
    );
    if points == 1 {
        return vec![min];
    }
    let (a, b) = (min.ln(), max.ln());
    (0..points)
        .map(|i| match i {
            0 => min,
            i if i == points - 1 => max,
            i => (a + (b - a) * i as f64 / (points - 1) as f64).exp(),
        })
        .collect()
}

/// [`tube_report`] for every `ε`, computed in parallel; rows keep input order.
pub fn tube_sweep(
    lattice: &LatticeData,
    zf: &ZetaFunction,
    formula: &ExplicitFormula,
    dimension: &Float,
    eps: &[Rational],
    n: u32,
) -> Result<Vec<TubeReport>, DimsError> {
    use rayon::prelude::*;
    eps.par_iter()
        .map(|e| tube_report(lattice, zf, formula, dimension, e, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::{complex_dimensions, RootOptions};
    use crate::presets;
    use crate::zeta::build_zeta;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn setup(sys: &crate::SelfSimilarSystem) -> (ZetaFunction, DimensionSet, ExplicitFormula) {
        let zf = build_zeta(sys.lattice());
        let dims = complex_dimensions(&zf, RootOptions::default()).unwrap();
        let formula = ExplicitFormula::new(&zf, &dims).unwrap();
        (zf, dims, formula)
    }

    #[test]
    fn exact_volumes() {
        let cs = presets::cantor();
        let fs = presets::fibonacci();
        assert_eq!(volume_direct(cs.lattice(), &q(1, 9)), q(4, 27));
        assert_eq!(volume_direct(cs.lattice(), &q(1, 1)), q(1, 3));
        assert_eq!(volume_direct(fs.lattice(), &q(1, 8)), q(5, 16));
        // No interval has length in [1/3, 1/2]'s worth beyond 1/2, and c_1 = 0.
        assert_eq!(volume_direct(fs.lattice(), &q(1, 3)), q(1, 2));
        assert_eq!(volume_direct(fs.lattice(), &q(1, 4)), q(3, 8));
    }

    #[test]
    fn levels() {
        let l = presets::cantor();
        let l = l.lattice();
        assert_eq!(level_of(l, &q(1, 9)), 2);
        assert_eq!(level_of(l, &q(1, 10)), 2);
        assert_eq!(level_of(l, &q(1, 8)), 1);
        assert_eq!(level_of(l, &q(2, 1)), 0);
        let tiny = Rational::from((1, crate::Prime::new(3).unwrap().pow(500)));
        assert_eq!(level_of(l, &tiny), 500);
    }

    #[test]
    fn thick_volumes_and_threshold() {
        let cs = presets::cantor();
        let fs = presets::fibonacci();
        assert_eq!(thick_volume(cs.lattice(), &q(1, 1)), 1);
        assert_eq!(thick_volume(fs.lattice(), &q(1, 1)), 1);
        assert_eq!(boundary_measure(cs.lattice()), q(2, 3));
        assert_eq!(validity_threshold(cs.lattice()), 1);
        assert_eq!(validity_threshold(fs.lattice()), 1);
    }

    #[test]
    fn cantor_explicit_formula_converges() {
        let (_, _, formula) = setup(&presets::cantor());
        let eps = Float::with_val(128, 0.5);
        let errors: Vec<f64> = [100, 1000, 4000]
            .iter()
            .map(|&n| (formula.volume(&eps, n).value - q(1, 3)).abs().to_f64())
            .collect();
        assert!(errors[1] < errors[0] && errors[2] < errors[0], "{errors:?}");
        assert!(errors[2] < 1e-4);
    }

    #[test]
    fn fibonacci_explicit_formula() {
        let (_, _, formula) = setup(&presets::fibonacci());
        let eps = Float::with_val(128, 1) / 3u32;
        let v = formula.volume(&eps, 2000);
        assert!((v.value.to_f64() - 0.5).abs() < 1e-2);
        assert!(v.imaginary_residual < 1e-25);
    }

    #[test]
    fn zero_truncation_keeps_the_real_terms() {
        let (zf, dims, formula) = setup(&presets::cantor());
        let eps = Float::with_val(128, 0.01);
        let v = formula.volume(&eps, 0).value;
        let d = dims.dimension().unwrap();
        let res = &dims.lines()[0].residue.as_ref().unwrap().re;
        let one_minus_d = Float::with_val(128, 1u32 - d);
        let expected = Float::with_val(128, res / &one_minus_d) / zf.prime().get()
            * Float::with_val(128, &one_minus_d * Float::with_val(128, eps.ln_ref())).exp();
        assert!((v - expected).abs() < 1e-35);
        assert_eq!(truncation_range(&Float::with_val(64, 0.5), 0), (-1, 0));
        assert_eq!(truncation_range(&Float::new(64), 3), (-3, 3));
    }

    #[test]
    fn cantor_g_function() {
        let (_, _, formula) = setup(&presets::cantor());
        let x = Float::with_val(128, 0.3);
        let g = formula.fourier_g(0, &x, 500).unwrap();
        let shifted = formula
            .fourier_g(0, &Float::with_val(128, &x + 1u32), 500)
            .unwrap();
        assert!((&g - &shifted).abs() < 1e-30);
        assert!(g.im.clone().abs() < 1e-30);
        // At the jump the symmetric partial sums tend to the midpoint of 1/3 and 1/2.
        let at_jump = formula.fourier_g(0, &Float::new(128), 5000).unwrap();
        assert!((at_jump.re.to_f64() - 5.0 / 12.0).abs() < 2e-3);
        // Just right of the jump the profile starts at 1/3.
        let right = formula
            .fourier_g(0, &Float::with_val(128, 0.01), 5000)
            .unwrap();
        let expected = (1.5f64).powf(0.01) / 3.0;
        assert!((right.re.to_f64() - expected).abs() < 2e-3);
    }

    #[test]
    fn regrouped_sum_agrees() {
        for sys in [presets::cantor(), presets::fibonacci()] {
            let (_, _, formula) = setup(&sys);
            for e in [0.7, 0.123, 3.3e-4, 1.7e-7] {
                let eps = Float::with_val(128, e);
                let a = formula.volume(&eps, 300).value;
                let b = formula.volume_via_g(&eps, 300).unwrap().value;
                assert!(Float::with_val(128, &a - &b).abs() < a.abs() * 1e-25);
            }
        }
    }

    #[test]
    fn truncated_forms() {
        let (_, _, formula) = setup(&presets::cantor());
        let eps = Float::with_val(128, 0.05);
        let t = formula.truncated(&eps, 200).unwrap();
        assert!(t.gap.is_none());
        assert!((t.leading - formula.volume(&eps, 200).value).abs() < 1e-30);
        let (_, dims, formula) = setup(&presets::fibonacci());
        let gap = formula.truncated(&eps, 10).unwrap().gap.unwrap();
        let d = dims.dimension().unwrap().clone();
        assert!((gap - d * 2u32).abs() < 1e-30);
    }

    #[test]
    fn grids() {
        let g = log_uniform_grid(1e-6, 0.9, 200);
        assert_eq!(g.len(), 200);
        assert_eq!((g[0], g[199]), (1e-6, 0.9));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(log_uniform_grid(0.5, 0.5, 1), vec![0.5]);
    }

    #[test]
    fn breakpoints() {
        let zf = build_zeta(presets::cantor().lattice());
        assert!(is_breakpoint(&zf, &(Float::with_val(128, 1) / 27u32)));
        assert!(!is_breakpoint(&zf, &Float::with_val(128, 0.05)));
    }
}
