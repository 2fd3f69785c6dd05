//! The two reference strings: the 3-adic Cantor string and the 2-adic
//! Fibonacci string.

use crate::ifs::{validate_system, AffineContraction, SelfSimilarSystem};
use crate::padic::Prime;

/// Preset names accepted by [`by_name`].
pub const NAMES: [&str; 2] = ["cs3", "fs2"];

fn build(p: u64, maps: &[(&str, &str)]) -> SelfSimilarSystem {
    let prime = Prime::new(p).expect("preset prime");
    let maps = maps
        .iter()
        .map(|(a, b)| AffineContraction::parse(prime, a, b).expect("preset map"))
        .collect();
    validate_system(maps).expect("preset system")
}

/// `{3x, 2 + 3x}` on `Z_3`.
pub fn cantor() -> SelfSimilarSystem {
    build(3, &[("3", "0"), ("3", "2")])
}

/// `{2x, 1 + 4x}` on `Z_2`.
pub fn fibonacci() -> SelfSimilarSystem {
    build(2, &[("2", "0"), ("4", "1")])
}

pub fn by_name(name: &str) -> Option<SelfSimilarSystem> {
    match name {
        "cs3" => Some(cantor()),
        "fs2" => Some(fibonacci()),
        _ => None,
    }
}
