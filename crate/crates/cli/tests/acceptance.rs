//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use padic_tube::dims::{complex_dimensions, principal_part, DimensionSet, LineKind, RootOptions};
use padic_tube::ifs::{
    covering_depth, enumerate_intervals, length_counts, validate_system, AffineContraction,
    SelfSimilarSystem,
};
use padic_tube::minkowski::{
    average_content, cesaro_average, nonmeasurability_report, period_levels, ProfileOptions,
};
use padic_tube::num::Complex;
use padic_tube::tube::{volume_direct, volume_levels, ExplicitFormula};
use padic_tube::zeta::{build_zeta, series_coefficients, ZetaFunction};
use padic_tube::{presets, IntPolynomial, Prime};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

const PREC: u32 = 128;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn f(x: f64) -> Float {
    Float::with_val(PREC, x)
}

fn ln(x: u32) -> Float {
    Float::with_val(PREC, x).ln()
}

fn pi() -> Float {
    Float::with_val(PREC, Constant::Pi)
}

fn phi() -> Float {
    (Float::with_val(PREC, 5).sqrt() + 1u32) / 2u32
}

fn err(a: &Float, b: &Float) -> f64 {
    Float::with_val(PREC, a - b).abs().to_f64()
}

fn cli_json(args: &[&str]) -> (serde_json::Value, Duration, bool) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_padic-tube"))
        .args(args)
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    (
        serde_json::from_str(&text).unwrap_or(serde_json::Value::Null),
        elapsed,
        out.status.success(),
    )
}

fn dims_via_cli(preset: &str) -> Result<(DimensionSet, Duration), String> {
    let (json, elapsed, ok) = cli_json(&["dims", "--preset", preset, "--format", "json"]);
    if !ok {
        return Err("command failed".into());
    }
    let set: DimensionSet = serde_json::from_value(json).map_err(|e| e.to_string())?;
    Ok((set, elapsed))
}

fn criterion_1() -> Outcome {
    let (set, elapsed) = match dims_via_cli("cs3") {
        Ok(v) => v,
        Err(e) => return outcome(false, e),
    };
    let [line] = set.lines() else {
        return outcome(false, format!("{} lines", set.lines().len()));
    };
    let base = Float::with_val(PREC, ln(2) / ln(3));
    let period = Float::with_val(PREC, pi() * 2u32 / ln(3));
    let residue = Float::with_val(PREC, ln(3) * 2u32).recip();
    let res = line.residue.as_ref().expect("simple pole");
    let errors = [
        err(&line.base.re, &base),
        line.base.im.to_f64().abs(),
        err(set.period(), &period),
        err(&res.re, &residue),
        res.im.to_f64().abs(),
    ];
    let worst = errors.iter().cloned().fold(0.0, f64::max);
    let pass = set.kind() == LineKind::Pole
        && line.multiplicity == 1
        && worst <= 1e-12
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!("max error {worst:.1e}, {} ms", elapsed.as_millis()),
    )
}

fn criterion_2() -> Outcome {
    let (set, elapsed) = match dims_via_cli("fs2") {
        Ok(v) => v,
        Err(e) => return outcome(false, e),
    };
    let (zeros, zeros_elapsed, ok) = cli_json(&["zeros", "--preset", "fs2", "--format", "json"]);
    let zeros: Option<DimensionSet> = serde_json::from_value(zeros).ok();
    let [first, second] = set.lines() else {
        return outcome(false, format!("{} lines", set.lines().len()));
    };
    let log2_phi = Float::with_val(PREC, phi().ln() / ln(2));
    let five_ln2 = Float::with_val(PREC, ln(2) * 5u32);
    let res1 = Float::with_val(PREC, 3u32 - phi()) / &five_ln2;
    let res2 = Float::with_val(PREC, phi() + 2u32) / &five_ln2;
    let im2 = Float::with_val(PREC, pi() / ln(2));
    let r1 = first.residue.as_ref().expect("simple pole");
    let r2 = second.residue.as_ref().expect("simple pole");
    let errors = [
        err(&first.base.re, &log2_phi),
        first.base.im.to_f64().abs(),
        err(&second.base.re, &Float::with_val(PREC, -&log2_phi)),
        err(&second.base.im, &im2),
        err(&r1.re, &res1),
        r1.im.to_f64().abs(),
        err(&r2.re, &res2),
        r2.im.to_f64().abs(),
    ];
    let worst = errors.iter().cloned().fold(0.0, f64::max);
    let zeros_empty = ok && zeros.is_some_and(|z| z.is_empty());
    let pass = first.multiplicity == 1
        && second.multiplicity == 1
        && worst <= 1e-12
        && zeros_empty
        && elapsed < Duration::from_secs(1)
        && zeros_elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "max error {worst:.1e}, zero set empty: {zeros_empty}, {} ms",
            (elapsed + zeros_elapsed).as_millis()
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let lattice = presets::cantor().lattice().clone();
    let mut rng = StdRng::seed_from_u64(3);
    let mut mismatches = 0;
    for _ in 0..100 {
        let eps = Rational::from_f64(10f64.powf(rng.gen_range(-9.0..0.0))).expect("finite");
        // floor(log_3(1/ε)): the largest k with 3^k ε ≤ 1
        let mut k = 0u32;
        while Rational::from(Integer::from(3).pow(k + 1)) * &eps <= 1 {
            k += 1;
        }
        let expected = Rational::from((1, 3)) * Rational::from((2, 3)).pow(k as i32);
        if volume_direct(&lattice, &eps) != expected {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(1),
        format!("{mismatches} mismatches, {} ms", elapsed.as_millis()),
    )
}

fn criterion_4() -> Outcome {
    let cs3: Vec<String> = presets::cantor()
        .gaps()
        .iter()
        .map(ToString::to_string)
        .collect();
    let fs2: Vec<String> = presets::fibonacci()
        .gaps()
        .iter()
        .map(ToString::to_string)
        .collect();
    let c = presets::cantor()
        .gaps()
        .iter()
        .map(|b| (b.level(), b.center().clone()))
        .collect::<Vec<_>>();
    let f = presets::fibonacci()
        .gaps()
        .iter()
        .map(|b| (b.level(), b.center().clone()))
        .collect::<Vec<_>>();
    let pass = c == [(1, Integer::from(1))] && f == [(2, Integer::from(3))];
    outcome(pass, format!("cs3 {cs3:?}, fs2 {fs2:?}"))
}

/// Closed-form counts to level 30; enumeration histogram to `HISTOGRAM_LEVEL`.
const HISTOGRAM_LEVEL: usize = 18;

fn histogram(sys: &SelfSimilarSystem, max_m: usize) -> Vec<Integer> {
    let mut counts = vec![Integer::new(); max_m];
    for ball in enumerate_intervals(sys, covering_depth(sys.lattice(), max_m)) {
        let level = ball.level() as usize;
        if (1..=max_m).contains(&level) {
            counts[level - 1] += 1;
        }
    }
    counts
}

fn criterion_5() -> Outcome {
    let cantor = presets::cantor();
    let fib = presets::fibonacci();
    let cs3 = length_counts(cantor.lattice(), 30);
    let fs2 = length_counts(fib.lattice(), 30);
    let powers =
        (1..=30u32).all(|m| cs3[m as usize - 1] == Integer::from(Integer::u_pow_u(2, m - 1)));
    let (mut a, mut b) = (Integer::new(), Integer::from(1));
    let mut fibonacci = true;
    for count in &fs2 {
        fibonacci &= *count == a;
        let next = Integer::from(&a + &b);
        a = std::mem::replace(&mut b, next);
    }
    let hist = histogram(&cantor, HISTOGRAM_LEVEL) == cs3[..HISTOGRAM_LEVEL]
        && histogram(&fib, HISTOGRAM_LEVEL) == fs2[..HISTOGRAM_LEVEL];
    outcome(
        powers && fibonacci && hist,
        format!(
            "closed forms to m = 30: {}, enumeration histogram to m = {HISTOGRAM_LEVEL}: {hist}",
            powers && fibonacci
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut within = 0;
    let mut improved = 0;
    let mut worst = 0.0f64;
    for sys in [presets::cantor(), presets::fibonacci()] {
        let lattice = sys.lattice();
        let zf = build_zeta(lattice);
        let dims = complex_dimensions(&zf, RootOptions::with_precision(PREC)).expect("dimensions");
        let formula = ExplicitFormula::new(&zf, &dims).expect("formula");
        let ln_inv_r = Float::with_val(PREC, lattice.r().recip()).ln();
        for m in 1..=25u32 {
            let eps = Float::with_val(
                PREC,
                -(Float::with_val(PREC, &ln_inv_r * (f64::from(m) + 0.5))),
            )
            .exp();
            let direct = volume_direct(lattice, &eps.to_rational().expect("finite"));
            let direct = Float::with_val(PREC, &direct);
            let rel = |n: u32| {
                let v = formula.volume(&eps, n).value;
                Float::with_val(PREC, &v - &direct).abs() / &direct
            };
            let (coarse, fine) = (rel(2000), rel(8000));
            worst = worst.max(coarse.to_f64());
            within += usize::from(coarse <= 1e-2);
            improved += usize::from(fine < coarse);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        within == 50 && improved >= 45 && elapsed < Duration::from_secs(30),
        format!(
            "{within}/50 within 1e-2 (worst {worst:.2e}), N = 8000 better at {improved}/50, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let sqrt5 = Float::with_val(PREC, 5).sqrt();
    let cs3_closed = Float::with_val(PREC, Float::with_val(PREC, ln(3) - ln(2)) * 6u32).recip();
    let fs2_closed = Float::with_val(
        PREC,
        Float::with_val(PREC, &sqrt5 + 5u32)
            * Float::with_val(PREC, Float::with_val(PREC, &sqrt5 - 1u32).ln()),
    )
    .recip();
    let mut details = Vec::new();
    let mut pass = true;
    for (sys, closed) in [
        (presets::cantor(), cs3_closed),
        (presets::fibonacci(), fs2_closed),
    ] {
        let lattice = sys.lattice();
        let dims = complex_dimensions(&build_zeta(lattice), RootOptions::with_precision(PREC))
            .expect("dimensions");
        let average = average_content(lattice, &dims).expect("simple pole");
        let cesaro = cesaro_average(lattice, &dims, 400).expect("simple pole");
        let e_avg = err(&average, &closed);
        let e_ces = err(&cesaro, &closed) / closed.to_f64();
        pass &= e_avg <= 1e-12 && e_ces <= 1e-2;
        details.push(format!(
            "closed-form error {e_avg:.1e}, Cesaro rel. error {e_ces:.1e}"
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "cs3: {}; fs2: {}; {} ms",
            details[0],
            details[1],
            elapsed.as_millis()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (name, sys) in [("cs3", presets::cantor()), ("fs2", presets::fibonacci())] {
        let lattice = sys.lattice();
        let dims = complex_dimensions(&build_zeta(lattice), RootOptions::with_precision(PREC))
            .expect("dimensions");
        let report =
            nonmeasurability_report(lattice, &dims, ProfileOptions::default()).expect("report");
        pass &= report.amplitude > 1e-6;
        if name == "cs3" {
            let exact = report.exact.as_ref();
            let third = Float::with_val(PREC, 3).recip();
            let exact_ok = exact.is_some_and(|e| {
                e.liminf == Rational::from((1, 3)) && e.limsup == Rational::from((1, 2))
            });
            let numeric_ok =
                err(&report.liminf, &third) < 1e-30 && err(&report.limsup, &f(0.5)) < 1e-30;
            pass &= exact_ok && numeric_ok;
            details.push(format!(
                "cs3 liminf {} limsup {}",
                exact.map_or("?".into(), |e| e.liminf.to_string()),
                exact.map_or("?".into(), |e| e.limsup.to_string())
            ));
        }
        details.push(format!("{name} amplitude {:.6}", report.amplitude.to_f64()));
    }
    outcome(pass, details.join(", "))
}

/// A random valid system: disjoint image balls of level at most 4, each the
/// image of `x -> p^l u x + c` with `u` a random p-adic unit.
fn random_system(rng: &mut StdRng) -> SelfSimilarSystem {
    let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
    let prime = Prime::new(p).expect("prime");
    loop {
        let target = rng.gen_range(2..=5);
        let mut balls: Vec<(u32, i64)> = Vec::new();
        for _ in 0..40 {
            if balls.len() == target {
                break;
            }
            let level = rng.gen_range(1..=4u32);
            let modulus = (p as i64).pow(level);
            let center = rng.gen_range(0..modulus);
            let disjoint = balls.iter().all(|&(l, c)| {
                let m = (p as i64).pow(l.min(level));
                c.rem_euclid(m) != center.rem_euclid(m)
            });
            if disjoint {
                balls.push((level, center));
            }
        }
        let measure: Rational = balls
            .iter()
            .map(|&(l, _)| prime.rational_pow(-i64::from(l)))
            .sum();
        if balls.len() < 2 || measure >= 1 {
            continue;
        }
        let unit = |rng: &mut StdRng| loop {
            let u = rng.gen_range(-20i64..=20);
            if u % p as i64 != 0 {
                return u;
            }
        };
        let maps = balls
            .iter()
            .map(|&(level, center)| {
                let a = Rational::from((prime.pow(level) * unit(rng), unit(rng).abs()));
                let shift = Rational::from((rng.gen_range(-3i64..=3), unit(rng).abs()));
                let b = Rational::from(center) + shift * Rational::from(prime.pow(level));
                AffineContraction::new(prime, a, b).expect("contraction")
            })
            .collect::<Vec<_>>();
        match validate_system(maps) {
            Ok(sys) => return sys,
            Err(e) => panic!("generator produced an invalid system: {e}"),
        }
    }
}

fn property_failures(sys: &SelfSimilarSystem) -> Vec<&'static str> {
    let mut failed = Vec::new();
    let lattice = sys.lattice();
    let gap_measure: Rational = sys.gaps().iter().map(padic_tube::padic::haar_measure).sum();
    let ratio_sum: Rational = sys
        .maps()
        .iter()
        .map(padic_tube::ifs::contraction_ratio)
        .sum();
    if gap_measure + ratio_sum != 1 {
        failed.push("gap identity");
    }
    let zf = build_zeta(lattice);
    let dims = match complex_dimensions(&zf, RootOptions::with_precision(PREC)) {
        Ok(d) => d,
        Err(_) => return vec!["root finding"],
    };
    let first = &dims.lines()[0];
    let d = &first.base.re;
    let tol = 1e-25;
    let rightmost = dims
        .lines()
        .iter()
        .all(|l| Float::with_val(PREC, &l.base.re - d).to_f64() <= tol);
    let strictly = period_levels(lattice) > 1
        || dims.lines()[1..]
            .iter()
            .all(|l| Float::with_val(PREC, d - &l.base.re).to_f64() > tol);
    if !(first.is_real() && first.multiplicity == 1 && rightmost && strictly && *d > 0 && *d < 1) {
        failed.push("D line");
    }
    if series_coefficients(&zf, 20) != length_counts(lattice, 20) {
        failed.push("series");
    }
    if volume_levels(lattice, 60).windows(2).any(|w| w[1] > w[0]) {
        failed.push("monotone V");
    }
    let report = nonmeasurability_report(lattice, &dims, ProfileOptions::default());
    let cesaro = cesaro_average(lattice, &dims, 400);
    match (report, cesaro) {
        (Ok(r), Ok(c)) if r.liminf <= c && c <= r.limsup => {}
        _ => failed.push("liminf <= cesaro <= limsup"),
    }
    failed
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(9);
    let mut failures = Vec::new();
    let mut primes = std::collections::BTreeMap::new();
    let (mut max_maps, mut non_unit_period) = (0, 0);
    for i in 0..200 {
        let sys = random_system(&mut rng);
        *primes.entry(sys.prime().get()).or_insert(0) += 1;
        max_maps = max_maps.max(sys.maps().len());
        non_unit_period += usize::from(period_levels(sys.lattice()) > 1);
        for what in property_failures(&sys) {
            failures.push(format!("#{i} {what}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(120);
    let mut detail = format!(
        "{} failures over 200 systems (systems per prime {primes:?}, up to {max_maps} maps, {non_unit_period} with gcd(n) > 1), {:.1} s",
        failures.len(),
        elapsed.as_secs_f64()
    );
    if !failures.is_empty() {
        detail.push_str(&format!(
            "; first: {}",
            failures
                .iter()
                .take(5)
                .cloned()
                .collect::<Vec<_>>()
                .join("; ")
        ));
    }
    outcome(pass, detail)
}

/// `(1/2πi) ∮ ζ(s) ε^{1−s} / (3(1−s)) ds` on `|s − ω| = ρ`, trapezoid rule.
fn contour_term(omega: &Float, eps: &Float, rho: f64, points: u32) -> Complex {
    let mut total = Complex::zero(PREC);
    let ln_eps = Float::with_val(PREC, eps.ln_ref());
    let ln3 = ln(3);
    for k in 0..points {
        let theta = Float::with_val(PREC, pi() * 2u32 * k) / points;
        let (sin, cos) = theta.sin_cos(Float::new(PREC));
        // ds / (2πi) = ρ e^{iθ} dθ / 2π
        let offset = Complex::new(
            Float::with_val(PREC, &cos * rho),
            Float::with_val(PREC, &sin * rho),
        );
        let s = Complex::new(Float::with_val(PREC, omega + &offset.re), offset.im.clone());
        let z = s.scale(&Float::with_val(PREC, -&ln3)).exp();
        let one = Complex::one(PREC);
        let two_z = z.scale(&f(2.0));
        let q = &one - &two_z;
        let zeta = &z / &(&q * &q);
        let one_minus_s = &one - &s;
        let power = one_minus_s.scale(&ln_eps).exp();
        let integrand = &(&zeta * &power) / &one_minus_s.scale(&f(3.0));
        total = &total + &(&integrand * &offset);
    }
    total.scale(&Float::with_val(PREC, points).recip())
}

fn criterion_10() -> Outcome {
    let prime = Prime::new(3).expect("prime");
    let zf = ZetaFunction::from_polynomials(
        prime,
        1,
        IntPolynomial::from_i64(&[0, 1]),
        IntPolynomial::from_i64(&[1, -4, 4]),
    )
    .expect("valid zeta");
    let dims = complex_dimensions(&zf, RootOptions::with_precision(PREC)).expect("dimensions");
    let line = &dims.lines()[0];
    let principal = principal_part(&zf, line).expect("pole");
    // z / (1 − 2z)^2 at z = e^{−hL}/2, L = ln 3: e^{−u}/(1 − e^{−u})^2 / 2 = 1/(2u^2) − 1/24 + O(u^2)
    let l = ln(3);
    let a2 = Float::with_val(PREC, Float::with_val(PREC, l.square_ref()) * 2u32).recip();
    let [c2, c1] = principal.as_slice() else {
        return outcome(
            false,
            format!("principal part has {} terms", principal.len()),
        );
    };
    let taylor_err = [
        err(&c2.re, &a2),
        c2.im.to_f64().abs(),
        c1.re.to_f64().abs(),
        c1.im.to_f64().abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let formula = ExplicitFormula::new(&zf, &dims).expect("formula");
    let omega = &line.base.re;
    let mut contour_err = 0.0f64;
    let mut slopes = Vec::new();
    let one_minus_omega = Float::with_val(PREC, 1u32 - omega);
    for eps in [1e-4, 1e-3, 1e-2, 0.2] {
        let eps = f(eps);
        let jet = formula.volume(&eps, 0).value;
        let contour = contour_term(omega, &eps, 0.05, 256);
        contour_err = contour_err.max(err(&jet, &contour.re) / jet.to_f64().abs());
        let scaled = Float::with_val(
            PREC,
            &jet / Float::with_val(PREC, Float::with_val(PREC, eps.ln_ref()) * &one_minus_omega)
                .exp(),
        );
        slopes.push((eps.ln().to_f64(), scaled.to_f64()));
    }
    // ε^{−(1−ω)} times the term is affine in ln ε with slope −a_{−2}/(3(1−ω))
    let slope = (slopes[1].1 - slopes[0].1) / (slopes[1].0 - slopes[0].0);
    let expected_slope = -a2.to_f64() / (3.0 * one_minus_omega.to_f64());
    let affine = slopes.windows(2).all(|w| {
        let s = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        (s - slope).abs() <= 1e-9 * slope.abs()
    });
    let slope_err = (slope - expected_slope).abs() / expected_slope.abs();
    let pass = line.multiplicity == 2
        && taylor_err <= 1e-10
        && contour_err <= 1e-6
        && affine
        && slope_err <= 1e-9;
    outcome(
        pass,
        format!("Taylor error {taylor_err:.1e}, contour rel. error {contour_err:.1e}, ln-eps slope rel. error {slope_err:.1e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Cantor complex dimensions", criterion_1),
        ("Fibonacci complex dimensions", criterion_2),
        ("exact Cantor volumes", criterion_3),
        ("gap extraction", criterion_4),
        ("length counts", criterion_5),
        ("explicit vs direct tube formula", criterion_6),
        ("average Minkowski content", criterion_7),
        ("nonmeasurability", criterion_8),
        ("random-system properties", criterion_9),
        ("multiple-pole path", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}  {name}: {}", i + 1, result.detail);
        failed += usize::from(!result.pass);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
