use std::f64::consts::PI;

use contact_spectra::eta::{Eta, NilpotentSeries};
use contact_spectra::model::{chi_prime, Block, ClassKind};
use contact_spectra::specfun::{
    bernoulli_polynomial, gamma_complex, hurwitz_zeta, jacobi_theta_direct, jacobi_theta_dual, lerch_at_root_of_unity,
    PrecisionConfig,
};
use contact_spectra::torsion::Torsion;
use contact_spectra::verify::random_dataset;
use num_complex::Complex64;
use proptest::prelude::*;

fn cfg() -> PrecisionConfig {
    PrecisionConfig::default()
}

/// Σ_{n<N} z^n (n+x)^{−s} with the boundary term of summation by parts;
/// the remainder is O(α·N^{−Re s−1}).
fn lerch_oracle(r: i64, alpha: u32, s: Complex64, x: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, 2.0 * PI * r as f64 / f64::from(alpha));
    let n_max = 20_000 * alpha as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for n in 0..n_max {
        sum += zn * (-s * (n as f64 + x).ln()).exp();
        zn *= z;
    }
    // Partial sums of z^n are 1/(1−z) − z^n/(1−z); mean 1/(1−z), value at N is (1−z^N)/(1−z).
    let mean = 1.0 / (1.0 - z);
    let at_n = (1.0 - zn) / (1.0 - z);
    sum + (mean - at_n) * (-s * (n_max as f64 + x).ln()).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_poisson_duality(x in 0.001f64..=1.0, t in 0.01f64..100.0) {
        let cfg = cfg();
        let a = jacobi_theta_direct(x, t, &cfg).unwrap();
        let b = jacobi_theta_dual(x, t, &cfg).unwrap();
        prop_assert!((a - b).abs() <= 10.0 * cfg.target_abs_tol * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn hurwitz_reflection_at_negative_integers(p in 0usize..=9, x in 0.01f64..0.99) {
        let cfg = cfg();
        let s = Complex64::new(-(p as f64), 0.0);
        let lhs = hurwitz_zeta(s, x, &cfg).unwrap() + hurwitz_zeta(s, 1.0 - x, &cfg).unwrap();
        let want = if p % 2 == 0 { 0.0 } else { -2.0 * bernoulli_polynomial(p + 1, x).unwrap() / (p + 1) as f64 };
        prop_assert!((lhs - want).norm() < 1e-9, "p = {p}, x = {x}: {lhs} vs {want}");
    }

    #[test]
    fn gamma_reflection(re in -6.0f64..6.0, im in -6.0f64..6.0) {
        prop_assume!((re - re.round()).abs() > 0.05 || im.abs() > 0.05);
        let s = Complex64::new(re, im);
        let v = gamma_complex(s).unwrap() * gamma_complex(1.0 - s).unwrap() * (PI * s).sin();
        prop_assert!((v - PI).norm() < 1e-11 * PI.max(v.norm()), "{s}: {v}");
    }

    #[test]
    fn nilpotent_exponential_is_a_homomorphism(
        k in 1u32..=3,
        a in proptest::collection::vec(-1.0f64..1.0, 12),
        b in proptest::collection::vec(-1.0f64..1.0, 12),
    ) {
        let n = 2 * k as usize;
        let sa = NilpotentSeries::from_coefficients(a[..n].iter().map(|&v| Complex64::new(v, 0.3 * v)).collect()).unwrap();
        let sb = NilpotentSeries::from_coefficients(b[..n].iter().map(|&v| Complex64::new(-0.5 * v, v)).collect()).unwrap();
        let lhs = (&sa + &sb).exp();
        let rhs = &sa.exp() * &sb.exp();
        for m in 0..n {
            prop_assert!((lhs.coeff(m) - rhs.coeff(m)).norm() < 1e-12 * (1.0 + lhs.coeff(m).norm()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lerch_matches_direct_series(alpha in 2u32..=12, r_seed in 0i64..1000, x in 0.05f64..=1.0, im in -2.0f64..2.0) {
        let r = 1 + r_seed % i64::from(alpha - 1);
        let s = Complex64::new(2.0, im);
        let v = lerch_at_root_of_unity(r, alpha, s, x, &cfg()).unwrap();
        let w = lerch_oracle(r, alpha, s, x);
        prop_assert!((v - w).norm() < 1e-10, "r = {r}, α = {alpha}, x = {x}, s = {s}: {v} vs {w}");
    }

    #[test]
    fn orbits_are_symmetric_and_avoid_generic_powers(seed in any::<u64>(), cutoff_ratio in 0.05f64..4.0) {
        let d = random_dataset(seed);
        let orbits = d.enumerate_orbits(cutoff_ratio * d.fiber_length());
        for o in &orbits {
            let mirror = match o.kind {
                ClassKind::Generic { n } => ClassKind::Generic { n: -n },
                ClassKind::Exceptional { j, r } => {
                    prop_assert!(r % i64::from(d.alpha(j)) != 0);
                    ClassKind::Exceptional { j, r: -r }
                }
            };
            prop_assert!(orbits.iter().any(|p| p.kind == mirror && (p.length + o.length).abs() < 1e-12));
            prop_assert!(o.length.abs() <= cutoff_ratio * d.fiber_length() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn exceptional_characters_are_periodic_up_to_the_parent(seed in any::<u64>(), r in -20i64..20) {
        let d = random_dataset(seed);
        for j in 0..d.exceptional_count() {
            let alpha = i64::from(d.alpha(j));
            let direct = d.rep().character(ClassKind::Exceptional { j, r: r + alpha }).unwrap();
            let shifted: Complex64 = d.rep().exceptional_blocks[j]
                .iter()
                .map(|b| f64::from(b.mult) * Complex64::from_polar(1.0, 2.0 * PI * (r as f64 * b.x + b.parent_x)))
                .sum();
            prop_assert!((direct - shifted).norm() < 1e-9);
        }
    }

    #[test]
    fn chi_prime_ignores_block_splitting(seed in any::<u64>()) {
        let d = random_dataset(seed);
        let mut rep = d.rep().clone();
        let split: Vec<Block> = rep
            .generic_blocks
            .iter()
            .flat_map(|b| (0..b.mult).map(move |_| Block { x: b.x, mult: 1 }))
            .collect();
        rep.generic_blocks = split;
        prop_assert_eq!(chi_prime(d.seifert(), &rep), d.chi_prime());
    }

    #[test]
    fn heat_trace_forms_agree_at_random_times(seed in any::<u64>(), log_t in -3.0f64..3.0) {
        let d = random_dataset(seed);
        let t = log_t.exp();
        let tor = Torsion::new(&d, cfg());
        let geo = tor.theta_geo(t).unwrap().value;
        prop_assert!((geo - tor.theta_dyn(t).unwrap().value).abs() < 1e-9);
        prop_assert!((geo - tor.theta_top(t).unwrap().value).abs() < 1e-9);
    }

    #[test]
    fn eta_trace_forms_agree_at_random_times(seed in any::<u64>(), log_t in -3.0f64..3.0) {
        let d = random_dataset(seed);
        let t = log_t.exp();
        let eta = Eta::new(&d, cfg()).unwrap();
        let (top, _) = eta.theta_s_top_complex(t).unwrap();
        let (dyn_, _) = eta.theta_s_dyn_complex(t).unwrap();
        prop_assert!((top - dyn_).norm() < 1e-9 * top.norm().max(1.0), "{top} vs {dyn_}");
    }

    #[test]
    fn eta_invariant_forms_agree(seed in any::<u64>()) {
        let d = random_dataset(seed);
        let eta = Eta::new(&d, cfg()).unwrap();
        let g = eta.eta0_geo().unwrap().value;
        let y = eta.eta0_dyn().unwrap().value;
        let z = eta.eta0_zeta().unwrap().value;
        prop_assert!((g - y).abs() < 1e-8 && (g - z).abs() < 1e-8, "{g} {y} {z}");
    }

    #[test]
    fn index_dh_is_integral_on_the_spectrum(seed in any::<u64>(), n in -30i64..30) {
        let d = random_dataset(seed);
        let tor = Torsion::new(&d, cfg());
        for b in d.rep().generic_angles() {
            prop_assert!(tor.index_dh(b.x + n as f64).is_ok());
        }
    }
}
