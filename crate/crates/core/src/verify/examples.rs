use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::model::{Block, Dataset, ExceptionalBlock, ExceptionalOrbit, RepresentationData, SeifertData};

fn trivial_rep(x: f64, exceptional: &[(f64, f64)]) -> RepresentationData {
    RepresentationData {
        generic_blocks: vec![Block { x, mult: 1 }],
        exceptional_blocks: exceptional
            .iter()
            .map(|&(x_jk, parent_x)| {
                vec![ExceptionalBlock {
                    x: x_jk,
                    mult: 1,
                    parent_x,
                }]
            })
            .collect(),
    }
}

fn seifert(chi: i64, k: u32, kappa: &[(u32, f64)], exceptional: &[(u32, Vec<i64>)]) -> SeifertData {
    SeifertData {
        chi_n_star: chi,
        fiber_length: 2.0 * PI,
        exceptional: exceptional
            .iter()
            .map(|(alpha, beta)| ExceptionalOrbit {
                alpha: *alpha,
                rotation_numbers: beta.clone(),
            })
            .collect(),
        k: Some(k),
        kappa: kappa.iter().copied().collect::<BTreeMap<_, _>>(),
    }
}

fn dataset(seifert: SeifertData, rep: RepresentationData) -> Dataset {
    Dataset::new(seifert, rep).expect("worked example is valid")
}

/// S³ → S² with the trivial rank-1 representation, k = 1, κ_1 = 1.
pub fn hopf() -> Dataset {
    dataset(seifert(2, 1, &[(1, 1.0)], &[]), trivial_rep(1.0, &[]))
}

/// No exceptional orbits, trivial rank 1, k = 1, κ_1 = d.
pub fn smooth_k1(d: f64) -> Dataset {
    dataset(seifert(2, 1, &[(1, d)], &[]), trivial_rep(1.0, &[]))
}

/// Base with χ = 4, trivial rank 1, k = 2, κ_1 = 16/3, κ_3 = 16.
pub fn smooth_k2() -> Dataset {
    dataset(seifert(4, 2, &[(1, 16.0 / 3.0), (3, 16.0)], &[]), trivial_rep(1.0, &[]))
}

/// Rank 1 with ρ(f) = −1, so the torsion is 4 and χ' = 0.
pub fn half_twist() -> Dataset {
    dataset(seifert(2, 1, &[(1, 2.0)], &[]), trivial_rep(0.5, &[]))
}

/// One α = 2 point; ν vanishes at k = 1.
pub fn alpha_two() -> Dataset {
    dataset(seifert(1, 1, &[(1, 1.0)], &[(2, vec![1])]), trivial_rep(1.0, &[(0.5, 1.0)]))
}

/// One α = 3 point with κ_1 = 1/3, so every index is an integer.
pub fn alpha_three() -> Dataset {
    dataset(seifert(1, 1, &[(1, 1.0 / 3.0)], &[(3, vec![1])]), trivial_rep(1.0, &[(1.0, 1.0)]))
}

/// [`hopf`] with κ_1 = 1/2, which makes ind(λ) half-integral at odd λ.
pub fn corrupted_kappa() -> Dataset {
    hopf()
        .with_kappa([(1, 0.5)].into_iter().collect())
        .expect("kappa key is valid")
}

/// All worked examples with their report names.
pub fn worked_examples() -> Vec<(&'static str, Dataset)> {
    vec![
        ("hopf", hopf()),
        ("smooth_k2", smooth_k2()),
        ("half_twist", half_twist()),
        ("alpha_two", alpha_two()),
        ("alpha_three", alpha_three()),
    ]
}
