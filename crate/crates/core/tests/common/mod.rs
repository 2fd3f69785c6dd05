#![allow(dead_code)]

use padic_tube::dims::{complex_dimensions, DimensionSet, RootOptions};
use padic_tube::ifs::{validate_system, AffineContraction, SelfSimilarSystem};
use padic_tube::zeta::{build_zeta, ZetaFunction};
use padic_tube::Prime;
use proptest::prelude::*;
use rug::Rational;

pub const PREC: u32 = 128;

/// One map before validation: image ball `center + p^level Z_p` and unit
/// data for `a = p^level u_a / v_a`, `b = center + p^level t / v_b`.
#[derive(Clone, Debug)]
pub struct MapSeed {
    pub level: u32,
    pub center: u64,
    pub unit: (i64, i64),
    pub shift: (i64, i64),
}

fn unit_part(x: i64, p: u64) -> i64 {
    let mut x = x;
    while x % p as i64 == 0 {
        x /= p as i64;
    }
    x
}

fn disjoint(p: u64, a: &MapSeed, b: &MapSeed) -> bool {
    let m = p.pow(a.level.min(b.level));
    a.center % m != b.center % m
}

/// Turns seeds into a valid system, or `None` when the balls overlap or
/// cover `Z_p`.
pub fn build(p: u64, seeds: &[MapSeed]) -> Option<SelfSimilarSystem> {
    let prime = Prime::new(p).ok()?;
    let mut kept: Vec<MapSeed> = Vec::new();
    for s in seeds {
        let s = MapSeed {
            center: s.center % p.pow(s.level),
            ..s.clone()
        };
        if kept.iter().all(|k| disjoint(p, k, &s)) {
            kept.push(s);
        }
    }
    let measure: Rational = kept
        .iter()
        .map(|s| prime.rational_pow(-i64::from(s.level)))
        .sum();
    if kept.len() < 2 || measure >= 1 {
        return None;
    }
    let maps = kept
        .iter()
        .map(|s| {
            let scale = prime.pow(s.level);
            let a = Rational::from((
                scale.clone() * unit_part(s.unit.0, p),
                unit_part(s.unit.1, p).abs(),
            ));
            let b = Rational::from(s.center)
                + Rational::from((s.shift.0, unit_part(s.shift.1, p).abs())) * scale;
            AffineContraction::new(prime, a, b).expect("contraction")
        })
        .collect();
    Some(validate_system(maps).expect("seeds give a valid system"))
}

fn seed() -> impl Strategy<Value = MapSeed> {
    let nonzero = prop_oneof![-9i64..=-1, 1i64..=9];
    (
        1u32..=4,
        any::<u64>(),
        (nonzero.clone(), nonzero.clone()),
        (-3i64..=3, nonzero),
    )
        .prop_map(|(level, center, unit, shift)| MapSeed {
            level,
            center,
            unit,
            shift,
        })
}

/// Random valid systems over `p ∈ {2, 3, 5, 7}` with images of level ≤ 4.
pub fn systems() -> impl Strategy<Value = SelfSimilarSystem> {
    (
        prop::sample::select(vec![2u64, 3, 5, 7]),
        prop::collection::vec(seed(), 2..=6),
    )
        .prop_filter_map("overlapping or covering images", |(p, seeds)| {
            build(p, &seeds)
        })
}

pub fn analyse(sys: &SelfSimilarSystem) -> (ZetaFunction, DimensionSet) {
    let zf = build_zeta(sys.lattice());
    let dims = complex_dimensions(&zf, RootOptions::with_precision(PREC)).expect("dimensions");
    (zf, dims)
}
