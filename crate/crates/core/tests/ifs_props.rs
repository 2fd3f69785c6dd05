mod common;

use std::collections::BTreeSet;

use padic_tube::ifs::{
    contraction_ratio, covering_depth, enumerate_intervals, image_ball, length_counts,
    total_measure, word_images, SelfSimilarSystem,
};
use padic_tube::padic::{ball_relation, canonical_decomposition, haar_measure, BallRelation};
use padic_tube::zeta::{build_zeta, series_coefficients};
use padic_tube::PAdicBall;
use proptest::prelude::*;
use rug::{Integer, Rational};

/// Largest word length whose enumeration stays within `budget` balls.
fn affordable_depth(sys: &SelfSimilarSystem, budget: usize) -> usize {
    let (n, k) = (sys.maps().len(), sys.gaps().len());
    let (mut depth, mut words, mut total) = (0, 1usize, k);
    while depth < 12 {
        words *= n;
        if total + words * k > budget {
            break;
        }
        total += words * k;
        depth += 1;
    }
    depth.max(1)
}

fn pairwise_disjoint(balls: &[PAdicBall]) -> bool {
    let set: BTreeSet<(u32, Integer)> = balls
        .iter()
        .map(|b| (b.level(), b.center().clone()))
        .collect();
    set.len() == balls.len()
        && balls.iter().all(|b| {
            let mut up = b.parent();
            while let Some(a) = up {
                if set.contains(&(a.level(), a.center().clone())) {
                    return false;
                }
                up = a.parent();
            }
            true
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn gaps_and_images_partition_the_unit_ball(sys in common::systems()) {
        let unit = PAdicBall::unit(sys.prime());
        let images: Vec<PAdicBall> = sys.maps().iter().map(|f| image_ball(f, &unit).unwrap()).collect();
        let mut parts = images.clone();
        parts.extend(sys.gaps().iter().cloned());
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                prop_assert_eq!(ball_relation(a, b).unwrap(), BallRelation::Disjoint);
            }
        }
        prop_assert_eq!(canonical_decomposition(&parts).unwrap(), vec![unit]);
        let ratios: Rational = sys.maps().iter().map(contraction_ratio).sum();
        let gaps: Rational = sys.gaps().iter().map(haar_measure).sum();
        prop_assert_eq!(ratios.clone() + gaps.clone(), Rational::from(1));
        prop_assert_eq!(sys.lattice().ratio_sum(), ratios);
        prop_assert_eq!(sys.lattice().gap_sum(), gaps);
        // gaps are maximal: no gap's parent avoids every image
        for g in sys.gaps() {
            if let Some(parent) = g.parent() {
                prop_assert!(images.iter().any(|im| ball_relation(im, &parent).unwrap() != BallRelation::Disjoint));
            }
        }
    }

    #[test]
    fn enumeration_matches_counts(sys in common::systems()) {
        let d = sys.d() as usize;
        let depth = affordable_depth(&sys, 3000);
        let max_m = depth * sys.lattice().scaled_scaling_exponents()[0] as usize;
        prop_assert_eq!(covering_depth(sys.lattice(), max_m), depth);
        let balls = enumerate_intervals(&sys, depth);
        prop_assert!(pairwise_disjoint(&balls));
        let mut hist = vec![Integer::new(); max_m];
        for b in &balls {
            // strongly lattice: every length is a power of r = p^{-d}
            prop_assert_eq!(b.level() as usize % d, 0);
            let m = b.level() as usize / d;
            if (1..=max_m).contains(&m) {
                hist[m - 1] += 1;
            }
        }
        prop_assert_eq!(hist, length_counts(sys.lattice(), max_m));
        // intervals avoid the next generation of images
        let mut with_images = balls.clone();
        with_images.extend(word_images(&sys, depth + 1));
        prop_assert!(pairwise_disjoint(&with_images));
    }

    #[test]
    fn enumerated_measure_increases_to_one(sys in common::systems()) {
        let mut previous = Rational::new();
        for depth in 0..3 {
            let m = total_measure(&enumerate_intervals(&sys, depth));
            prop_assert!(m > previous);
            prop_assert!(m < 1);
            previous = m;
        }
    }

    #[test]
    fn series_coefficients_are_length_counts(sys in common::systems()) {
        let zf = build_zeta(sys.lattice());
        prop_assert_eq!(series_coefficients(&zf, 64), length_counts(sys.lattice(), 64));
    }
}
