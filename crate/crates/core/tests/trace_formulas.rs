//! Closed forms against brute-force sums over the spectrum.

use contact_spectra::eta::Eta;
use contact_spectra::model::Dataset;
use contact_spectra::specfun::PrecisionConfig;
use contact_spectra::torsion::Torsion;
use contact_spectra::verify::{examples, random_dataset};
use num_complex::Complex64;

fn cfg() -> PrecisionConfig {
    PrecisionConfig::default()
}

fn near(a: f64, b: f64) -> bool {
    let d = a - b;
    (d - d.round()).abs() < 1e-9
}

/// ind(λ̂) by direct counting: dim V^λ̂·χ(N*) plus the exceptional
/// eigenangles matching λ̂/α_j.
fn index_by_counting(d: &Dataset, lambda: f64) -> i64 {
    let rep = d.rep();
    let generic: i64 = rep
        .generic_blocks
        .iter()
        .filter(|b| near(b.x, lambda))
        .map(|b| i64::from(b.mult))
        .sum();
    let mut idx = generic * d.chi_n_star();
    for (j, blocks) in rep.exceptional_blocks.iter().enumerate() {
        let alpha = f64::from(d.alpha(j));
        idx += blocks
            .iter()
            .filter(|b| near(b.x, lambda / alpha))
            .map(|b| i64::from(b.mult))
            .sum::<i64>();
    }
    idx
}

fn spectrum(d: &Dataset, radius: i64) -> Vec<f64> {
    let mut out = Vec::new();
    for b in d.rep().generic_angles() {
        for n in -radius - 1..=radius {
            let lambda = b.x + n as f64;
            if lambda != 0.0 && lambda.abs() <= radius as f64 {
                out.push(lambda);
            }
        }
    }
    out
}

#[test]
fn hopf_heat_trace_is_a_lattice_sum() {
    let d = examples::hopf();
    let tor = Torsion::new(&d, cfg());
    for t in [0.05, 0.3, 1.0, 4.0] {
        let oracle: f64 = (-400..=400).map(|n: i32| 2.0 * (-t * f64::from(n * n)).exp()).sum();
        for v in [tor.theta_geo(t).unwrap(), tor.theta_dyn(t).unwrap(), tor.theta_top(t).unwrap()] {
            assert!((v.value - oracle).abs() < 1e-11, "t = {t}: {} vs {oracle}", v.value);
        }
    }
}

#[test]
fn index_matches_counting() {
    for seed in 0..20 {
        let d = random_dataset(seed);
        let tor = Torsion::new(&d, cfg());
        for lambda in spectrum(&d, 30) {
            assert_eq!(tor.index_dh(lambda).unwrap(), index_by_counting(&d, lambda), "seed {seed}, λ = {lambda}");
        }
    }
}

#[test]
fn torsion_zeta_is_the_spectral_dirichlet_series() {
    let s = Complex64::new(3.0, 0.7);
    for seed in [0u64, 4, 9, 11, 17] {
        let d = random_dataset(seed);
        let a = d.spectral_scale();
        let radius = 4000;
        let oracle: Complex64 = spectrum(&d, radius)
            .into_iter()
            .map(|lambda| index_by_counting(&d, lambda) as f64 * (-2.0 * s * (a * lambda.abs()).ln()).exp())
            .sum();
        let tail_bound = 8.0 * f64::from(d.dim()) * a.powf(-6.0) * (radius as f64).powi(-5);
        let v = Torsion::new(&d, cfg()).zeta(s).unwrap();
        assert!((v - oracle).norm() < 1e-12 * oracle.norm().max(1.0) + tail_bound, "seed {seed}: {v} vs {oracle}");
    }
}

#[test]
fn eta_function_is_the_signed_spectral_series() {
    let s = Complex64::new(4.0, -0.4);
    let mut sets: Vec<Dataset> = examples::worked_examples().into_iter().map(|(_, d)| d).collect();
    sets.extend([1u64, 3, 6].map(random_dataset));
    for d in sets {
        let eta = Eta::new(&d, cfg()).unwrap();
        let a = d.spectral_scale();
        let oracle: Complex64 = spectrum(&d, 3000)
            .into_iter()
            .map(|lambda| {
                -lambda.signum() * eta.index_sig_complex(lambda).unwrap() * (-2.0 * s * (a * lambda.abs()).ln()).exp()
            })
            .sum();
        let v = eta.eta_function(s).unwrap();
        assert!((v - oracle).norm() < 1e-9 * oracle.norm().max(1.0), "{d:?}: {v} vs {oracle}");
    }
}

#[test]
fn smooth_eta_trace_is_a_moment_sum() {
    for kappa in [-2.0, 1.0, 3.0] {
        let d = examples::smooth_k1(kappa);
        let eta = Eta::new(&d, cfg()).unwrap();
        for t in [0.05, 0.5, 2.0] {
            let moment: f64 = (-400..=400).map(|n: i32| f64::from(n * n) * (-t * f64::from(n * n)).exp()).sum();
            let oracle = -t.sqrt() * kappa * moment;
            let top = eta.theta_s_top(t).unwrap().value;
            let dyn_ = eta.theta_s_dyn(t).unwrap().value;
            assert!((top - oracle).abs() < 1e-9 && (dyn_ - oracle).abs() < 1e-9, "{top} {dyn_} {oracle}");
        }
    }
}

#[test]
fn torsion_at_general_fiber_length() {
    // ℓ^{χ'} scaling of the closed form and of exp(−½Z'(0)).
    let base = examples::hopf();
    for ell in [1.0, 2.5, 9.0] {
        let d = base.with_fiber_length(ell).unwrap();
        let tor = Torsion::new(&d, cfg());
        let closed = tor.torsion_closed_form().unwrap().value;
        assert!((closed - ell * ell).abs() < 1e-10 * ell * ell);
        assert!((tor.torsion_from_zeta().unwrap().value - closed).abs() < 1e-8 * closed);
    }
}
