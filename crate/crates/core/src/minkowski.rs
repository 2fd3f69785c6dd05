//! Minkowski dimension, the oscillation of `ε^{−(1−D)} V(ε)` and the average
//! Minkowski content.
//!
//! Write `K = r^{D−1} = p^d x*`, where `x* = r^D` is the Moran root. On each
//! `ε = r^{m+x}`, `x ∈ [0, 1)`, the volume is the constant `V_m`, so the
//! normalized volume is `h_m(x) = V_m K^{m+x}`: increasing in `x`, with all
//! jumps at the breakpoints `r^m`.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::dims::{DimensionSet, LineKind};
use crate::error::DimsError;
use crate::ifs::LatticeData;
use crate::num;
use crate::tube::volume_levels;

/// Slope-fit window: `ε = r^{m+1/2}` for `m` in this range.
pub const FIT_LEVELS: std::ops::RangeInclusive<u32> = 5..=30;

/// Accepted deviation of the fitted slope from `1 − D`.
pub const FIT_TOLERANCE: f64 = 0.02;

#[derive(Clone, Debug)]
pub struct MinkowskiDimension {
    pub dimension: Float,
    /// Least-squares slope of `ln V` against `ln ε`.
    pub fitted_slope: f64,
    pub agrees: bool,
}

fn dominant(dims: &DimensionSet) -> Result<&crate::dims::DimensionLine, DimsError> {
    match dims.lines().first() {
        Some(line) if dims.kind() == LineKind::Pole && line.is_real() => Ok(line),
        _ => Err(DimsError::NotPole),
    }
}

/// `D`, together with an independent estimate from the exact volumes.
pub fn minkowski_dimension(
    lattice: &LatticeData,
    dims: &DimensionSet,
) -> Result<MinkowskiDimension, DimsError> {
    let line = dominant(dims)?;
    let levels = volume_levels(lattice, *FIT_LEVELS.end());
    let ln_r = -num::ln_inverse_ratio(64, lattice.prime().get(), lattice.d()).to_f64();
    let points: Vec<(f64, f64)> = FIT_LEVELS
        .map(|m| {
            let v = Float::with_val(128, &levels[m as usize]).ln().to_f64();
            ((f64::from(m) + 0.5) * ln_r, v)
        })
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let fitted_slope = sxy / sxx;
    let expected = 1.0 - line.base.re.to_f64();
    Ok(MinkowskiDimension {
        dimension: line.base.re.clone(),
        fitted_slope,
        agrees: (fitted_slope - expected).abs() <= FIT_TOLERANCE,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ProfileOptions {
    pub samples_per_period: u32,
    /// Level `m` at which the profile is read; chosen from the spectral gap
    /// when absent.
    pub base_level: Option<u32>,
    pub max_base_level: u32,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            samples_per_period: 64,
            base_level: None,
            max_base_level: 5000,
        }
    }
}

/// `h(x)` sampled at `x = k + (i + 1/2)/S` for each level `m0 + k` of one
/// asymptotic period of `period_levels` breakpoints.
#[derive(Clone, Debug)]
pub struct VolumeProfile {
    pub base_level: u32,
    pub period_levels: u32,
    /// `K = p^d x*`; the growth of `h` across one unit of `x`.
    pub growth: Float,
    /// `h_m(0)` for `m = m0, …, m0 + period_levels − 1`.
    pub breakpoint_values: Vec<Float>,
    /// Largest `|h_m(0) − h_{m+g}(0)|` over the window, a proxy for the
    /// remaining transient.
    pub periodicity_defect: Float,
    pub samples: Vec<(f64, Float)>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `D − max Re ω` over pole lines strictly left of the rightmost vertical
/// line, or `None` when every line shares the real part `D`.
pub fn decay_gap(dims: &DimensionSet) -> Option<Float> {
    let d = &dims.lines().first()?.base.re;
    let tol =
        Float::with_val(d.prec(), d.clone().abs().max(&Float::with_val(d.prec(), 1))) * 1e-25f64;
    dims.lines()
        .iter()
        .map(|l| Float::with_val(d.prec(), d - &l.base.re))
        .filter(|gap| *gap > tol)
        .min_by(|a, b| a.partial_cmp(b).expect("finite"))
}

fn choose_base_level(lattice: &LatticeData, dims: &DimensionSet, opts: &ProfileOptions) -> u32 {
    if let Some(m) = opts.base_level {
        return m;
    }
    let Some(delta) = decay_gap(dims) else {
        return 40;
    };
    let step =
        delta.to_f64() * num::ln_inverse_ratio(64, lattice.prime().get(), lattice.d()).to_f64();
    let needed = (1e8f64.ln() / step).ceil();
    (needed.max(40.0) as u32).min(opts.max_base_level)
}

/// Number of breakpoints after which the dominant part of `h_m(0)` repeats:
/// the gcd of the scaled scaling exponents.
pub fn period_levels(lattice: &LatticeData) -> u32 {
    lattice
        .scaled_scaling_exponents()
        .iter()
        .fold(0, |acc, &e| gcd(acc, e))
}

fn h_values(lattice: &LatticeData, k: &Float, from: u32, to: u32) -> Vec<Float> {
    let prec = k.prec();
    let levels = volume_levels(lattice, to);
    let mut kp = Float::with_val(prec, k.pow(from));
    (from..=to)
        .map(|m| {
            let h = Float::with_val(prec, &levels[m as usize]) * &kp;
            kp *= k;
            h
        })
        .collect()
}

/// Normalized volume `h(x) = ε^{−(1−D)} V(ε)` on one asymptotic period.
pub fn normalized_volume_profile(
    lattice: &LatticeData,
    dims: &DimensionSet,
    opts: ProfileOptions,
) -> Result<VolumeProfile, DimsError> {
    assert!(
        opts.samples_per_period >= 4,
        "need at least four samples per period"
    );
    let line = dominant(dims)?;
    let prec = dims.precision() + 32;
    let k = Float::with_val(prec, lattice.prime().pow(lattice.d())) * &line.z_root.re;
    let m0 = choose_base_level(lattice, dims, &opts);
    let g = period_levels(lattice);
    let h = h_values(lattice, &k, m0, m0 + 2 * g - 1);
    let breakpoint_values: Vec<Float> = h[..g as usize].to_vec();
    let periodicity_defect = (0..g as usize)
        .map(|i| Float::with_val(prec, &h[i] - &h[i + g as usize]).abs())
        .max_by(|a, b| a.partial_cmp(b).expect("finite"))
        .expect("g >= 1");
    let s = opts.samples_per_period;
    let mut samples = Vec::with_capacity((g * s) as usize);
    for (offset, h0) in breakpoint_values.iter().enumerate() {
        for i in 0..s {
            let x = (f64::from(i) + 0.5) / f64::from(s);
            let value = Float::with_val(prec, h0 * (Float::with_val(prec, k.ln_ref()) * x).exp());
            samples.push((offset as f64 + x, value));
        }
    }
    Ok(VolumeProfile {
        base_level: m0,
        period_levels: g,
        growth: k,
        breakpoint_values,
        periodicity_defect,
        samples,
    })
}

/// Exact limits of the normalized volume, available when `x*` is rational
/// and the rightmost vertical line carries a single pole line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactBounds {
    pub liminf: Rational,
    pub limsup: Rational,
}

#[derive(Clone, Debug)]
pub struct OscillationReport {
    pub dimension: Float,
    pub liminf: Float,
    pub limsup: Float,
    pub amplitude: Float,
    pub samples_per_period: u32,
    pub base_level: u32,
    /// `lim h_m(0) = −R r / (p x* (x* − r))`, `R = N(x*)/Q'(x*)`, when the
    /// rightmost line is alone.
    pub asymptotic_liminf: Option<Float>,
    pub exact: Option<ExactBounds>,
}

/// Rational root `1/b` of the Moran polynomial, if any. Such a root must have
/// `b` dividing the leading coefficient.
pub fn rational_moran_root(lattice: &LatticeData) -> Option<Rational> {
    let n = lattice.scaled_scaling_exponents();
    let top = *n.last()?;
    let lead = n.iter().filter(|&&e| e == top).count() as u32;
    (1..=lead)
        .filter(|b| lead.is_multiple_of(*b))
        .map(|b| Rational::from((1, b)))
        .find(|x| {
            let sum: Rational = n.iter().map(|&e| Rational::from(x.pow(e as i32))).sum();
            sum == 1
        })
}

fn moran_data(lattice: &LatticeData) -> (Vec<u32>, Vec<u32>) {
    (
        lattice.scaled_scaling_exponents().to_vec(),
        lattice.scaled_gap_exponents().to_vec(),
    )
}

/// `−R r / (p x (x − r))` with `R = N(x)/Q'(x)`, in exact arithmetic.
fn asymptotic_liminf_exact(lattice: &LatticeData, x: &Rational) -> Rational {
    let (n, m) = moran_data(lattice);
    let r = lattice.r();
    let numer: Rational = m.iter().map(|&e| Rational::from(x.pow(e as i32))).sum();
    let slope: Rational = n
        .iter()
        .map(|&e| -Rational::from(x.pow(e as i32 - 1)) * e)
        .sum();
    let residue = numer / slope;
    let p = Rational::from(lattice.prime().get());
    -residue * &r / (p * x * Rational::from(x - &r))
}

fn asymptotic_liminf_float(lattice: &LatticeData, x: &Float) -> Float {
    let prec = x.prec();
    let (n, m) = moran_data(lattice);
    let r = Float::with_val(prec, &lattice.r());
    let mut numer = Float::new(prec);
    for &e in &m {
        numer += Float::with_val(prec, x.pow(e));
    }
    let mut slope = Float::new(prec);
    for &e in &n {
        slope -= Float::with_val(prec, x.pow(e - 1)) * e;
    }
    let residue = numer / slope;
    let x_minus_r = Float::with_val(prec, x - &r);
    -residue * r / (x_minus_r * x * lattice.prime().get())
}

/// liminf and limsup of `ε^{−(1−D)} V(ε)` as `ε → 0`. Within each period the
/// normalized volume is increasing, so the extremes sit at breakpoints:
/// the liminf is the smallest right limit `h_m(0)`, the limsup the largest
/// left limit `K h_m(0)`.
pub fn nonmeasurability_report(
    lattice: &LatticeData,
    dims: &DimensionSet,
    opts: ProfileOptions,
) -> Result<OscillationReport, DimsError> {
    let line = dominant(dims)?;
    let profile = normalized_volume_profile(lattice, dims, opts)?;
    let prec = dims.precision();
    let min = profile
        .breakpoint_values
        .iter()
        .min_by(|a, b| a.partial_cmp(b).expect("finite"))
        .expect("g >= 1");
    let max = profile
        .breakpoint_values
        .iter()
        .max_by(|a, b| a.partial_cmp(b).expect("finite"))
        .expect("g >= 1");
    let liminf = Float::with_val(prec, min);
    let limsup = Float::with_val(prec, max * &profile.growth);
    let amplitude = Float::with_val(prec, &limsup - &liminf);
    let single = period_levels(lattice) == 1;
    let exact = match rational_moran_root(lattice) {
        Some(x) if single => {
            let liminf = asymptotic_liminf_exact(lattice, &x);
            let growth = Rational::from(lattice.prime().pow(lattice.d())) * &x;
            Some(ExactBounds {
                limsup: Rational::from(&liminf * &growth),
                liminf,
            })
        }
        _ => None,
    };
    let asymptotic_liminf = single.then(|| {
        let x = Float::with_val(prec + 32, &line.z_root.re);
        Float::with_val(prec, asymptotic_liminf_float(lattice, &x))
    });
    Ok(OscillationReport {
        dimension: line.base.re.clone(),
        liminf,
        limsup,
        amplitude,
        samples_per_period: opts.samples_per_period,
        base_level: profile.base_level,
        asymptotic_liminf,
        exact,
    })
}

/// `M_av = res(ζ; D) / (p (1 − D))`.
pub fn average_content(lattice: &LatticeData, dims: &DimensionSet) -> Result<Float, DimsError> {
    let line = dominant(dims)?;
    let residue = line
        .residue
        .as_ref()
        .ok_or(DimsError::NotSimple(line.multiplicity))?;
    let prec = dims.precision();
    let one_minus_d = Float::with_val(prec, 1u32 - &line.base.re);
    Ok(Float::with_val(prec, &residue.re / one_minus_d) / lattice.prime().get())
}

/// `(1 / ln T) ∫_{1/T}^{1} ε^{−(1−D)} V(ε) dε/ε` with `T = r^{−L}`, integrated
/// exactly: `V = V_m` on `(r^{m+1}, r^m]`, so each piece contributes
/// `V_m (r^{m(D−1)} − r^{(m+1)(D−1)}) / (D − 1)`.
pub fn cesaro_average(
    lattice: &LatticeData,
    dims: &DimensionSet,
    big_l: u32,
) -> Result<Float, DimsError> {
    assert!(big_l >= 1, "L must be positive");
    let line = dominant(dims)?;
    let prec = dims.precision() + 32;
    let d = Float::with_val(prec, &line.base.re);
    let k = Float::with_val(prec, lattice.prime().pow(lattice.d())) * &line.z_root.re;
    let levels = volume_levels(lattice, big_l - 1);
    let mut kp = Float::with_val(prec, 1);
    let mut total = Float::new(prec);
    for v in &levels {
        let next = Float::with_val(prec, &kp * &k);
        total += Float::with_val(prec, v) * Float::with_val(prec, &kp - &next);
        kp = next;
    }
    let d_minus_1 = Float::with_val(prec, &d - 1u32);
    let ln_t = num::ln_inverse_ratio(prec, lattice.prime().get(), lattice.d()) * big_l;
    Ok(Float::with_val(dims.precision(), total / d_minus_1 / ln_t))
}
