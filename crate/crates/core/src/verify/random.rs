use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Block, Dataset, ExceptionalBlock, ExceptionalOrbit, RepresentationData, SeifertData};

const MAX_DENOMINATOR: i64 = 24;
const MAX_ALPHA: u32 = 8;

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// p/q in (0, 1] with q ≤ 24.
fn rational_angle(rng: &mut ChaCha8Rng) -> f64 {
    let q = rng.random_range(1..=MAX_DENOMINATOR);
    let p = rng.random_range(1..=q);
    p as f64 / q as f64
}

fn coprime_residue(rng: &mut ChaCha8Rng, alpha: i64) -> i64 {
    loop {
        let b = rng.random_range(1..alpha);
        if gcd(b, alpha) == 1 {
            return b;
        }
    }
}

/// A valid dataset drawn from `seed`: χ(N*) ∈ [−3, 3], up to three
/// exceptional orbits with α ≤ 8, rational generic eigenangles with
/// denominators ≤ 24, and exceptional eigenangles chosen among the α-th roots
/// of their parent so compatibility holds exactly. Also draws k ∈ {1, 2},
/// rotation numbers, κ_m ∈ [−3, 3] and ℓ(f) ∈ 2π·[0.5, 2].
pub fn random_dataset(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chi_n_star = rng.random_range(-3..=3);
    let k: u32 = rng.random_range(1..=2);
    let fiber_length = 2.0 * PI * rng.random_range(0.5..2.0);
    let n_exceptional = rng.random_range(0..=3);
    let alphas: Vec<u32> = (0..n_exceptional).map(|_| rng.random_range(2..=MAX_ALPHA)).collect();

    let n_generic = rng.random_range(1..=3);
    let mut generic_blocks = Vec::new();
    for _ in 0..n_generic {
        generic_blocks.push(Block {
            x: rational_angle(&mut rng),
            mult: rng.random_range(1..=2),
        });
    }

    let mut exceptional_blocks = Vec::new();
    let mut exceptional = Vec::new();
    for &alpha in &alphas {
        let mut blocks = Vec::new();
        for b in &generic_blocks {
            for _ in 0..b.mult {
                let shift = rng.random_range(0..alpha);
                let x = (b.x + f64::from(shift)) / f64::from(alpha);
                blocks.push(ExceptionalBlock {
                    x,
                    mult: 1,
                    parent_x: b.x,
                });
            }
        }
        exceptional_blocks.push(blocks);
        let rotation_numbers = (0..2 * k - 1)
            .map(|_| coprime_residue(&mut rng, i64::from(alpha)))
            .collect();
        exceptional.push(ExceptionalOrbit { alpha, rotation_numbers });
    }

    let kappa: BTreeMap<u32, f64> = (1..2 * k)
        .step_by(2)
        .map(|m| (m, f64::from(rng.random_range(-18..=18)) / 6.0))
        .collect();

    Dataset::new(
        SeifertData {
            chi_n_star,
            fiber_length,
            exceptional,
            k: Some(k),
            kappa,
        },
        RepresentationData {
            generic_blocks,
            exceptional_blocks,
        },
    )
    .expect("generator only produces valid data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        for seed in 0..200 {
            let a = random_dataset(seed);
            let b = random_dataset(seed);
            assert_eq!(a, b);
            assert!((-3..=3).contains(&a.chi_n_star()));
            assert!(a.exceptional_count() <= 3);
            for j in 0..a.exceptional_count() {
                assert!((2..=MAX_ALPHA).contains(&a.alpha(j)));
            }
        }
    }

    #[test]
    fn seeds_differ() {
        let distinct: std::collections::BTreeSet<String> =
            (0..20).map(|s| format!("{:?}", random_dataset(s))).collect();
        assert!(distinct.len() > 15);
    }
}
