//! Conformance suite: every closed-form identity evaluated on one dataset,
//! with the largest observed deviation per check.

pub mod examples;
pub mod random;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::eta::{ChMode, ChSite, ChValue, Eta, Parity};
use crate::model::Dataset;
use crate::specfun::{gamma_complex, PrecisionConfig};
use crate::torsion::{Torsion, TorsionMethod};

pub use examples::worked_examples;
pub use random::random_dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The dataset lacks the fields the check needs (k, κ, rotation numbers).
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity under test.
    pub identity: String,
    pub status: CheckStatus,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub grid: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// SHA-256 of the canonical JSON of the dataset and precision settings.
    pub fingerprint: String,
}

impl VerificationReport {
    /// No check failed. Skipped checks do not count as failures.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Twenty log-spaced points in [0.05, 20].
pub fn log_grid() -> Vec<f64> {
    log_spaced(0.05, 20.0, 20)
}

pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

const GRID_DESC: &str = "20 log-spaced t in [0.05, 20]";
const HOMOGENEITY_FACTORS: [f64; 2] = [0.5, 3.0];

/// Ten s with Re s ∈ [−1.4, −0.1], |Im s| ≤ 1, at distance ≥ 0.05 from −½ and −1.
pub fn strip_samples() -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::with_capacity(10);
    while out.len() < 10 {
        let s = Complex64::new(rng.random_range(-1.4..-0.1), rng.random_range(-1.0..1.0));
        if (s + 0.5).norm() >= 0.05 && (s + 1.0).norm() >= 0.05 {
            out.push(s);
        }
    }
    out
}

pub fn fingerprint(data: &Dataset, cfg: &PrecisionConfig) -> String {
    let doc = serde_json::json!({ "dataset": data, "precision": cfg });
    hex::encode(Sha256::digest(doc.to_string().as_bytes()))
}

struct Spec {
    name: &'static str,
    identity: &'static str,
    tolerance: f64,
    grid: String,
}

impl Spec {
    fn new(name: &'static str, identity: &'static str, tolerance: f64, grid: impl Into<String>) -> Self {
        Self {
            name,
            identity,
            tolerance,
            grid: grid.into(),
        }
    }

    fn finish(self, outcome: Result<f64>) -> Check {
        let (status, max_deviation, detail) = match outcome {
            Ok(dev) if dev <= self.tolerance => (CheckStatus::Pass, dev, None),
            Ok(dev) => (CheckStatus::Fail, dev, None),
            Err(Error::EtaDataMissing(msg)) => (CheckStatus::Skipped, 0.0, Some(msg)),
            Err(e) => (CheckStatus::Fail, f64::INFINITY, Some(e.to_string())),
        };
        Check {
            name: self.name.into(),
            identity: self.identity.into(),
            status,
            max_deviation,
            tolerance: self.tolerance,
            grid: self.grid,
            detail,
        }
    }
}

fn max_over<T: Copy>(items: &[T], f: impl Fn(T) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in items {
        worst = worst.max(f(x)?);
    }
    Ok(worst)
}

fn rescale(data: &Dataset, factor: f64) -> Result<Dataset> {
    let kappa = data
        .seifert()
        .kappa
        .iter()
        .map(|(&m, &v)| (m, v * factor.powi(m as i32)))
        .collect();
    Ok(data.with_fiber_length(factor * data.fiber_length())?.with_kappa(kappa)?)
}

/// Normalized spectral points λ̂ with |λ̂| ≤ 24.
fn spectral_window(data: &Dataset) -> Vec<f64> {
    let mut out = Vec::new();
    for b in data.rep().generic_angles() {
        for n in -25i64..=24 {
            let lambda = b.x + n as f64;
            if lambda.abs() <= 24.0 {
                out.push(lambda);
            }
        }
    }
    out
}

type Job<'a> = Box<dyn Fn() -> Check + Send + Sync + 'a>;

fn torsion_jobs<'a>(data: &'a Dataset, cfg: PrecisionConfig) -> Vec<Job<'a>> {
    let grid = log_grid();
    let strip = strip_samples();
    let mut jobs: Vec<Job<'a>> = Vec::new();

    let g = grid.clone();
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        Spec::new("torsion_trace_geo_dyn", "ϑ^geo(t) = ϑ^dyn(t)", 1e-9, GRID_DESC).finish(max_over(&g, |t| {
            Ok((tor.theta_geo(t)?.value - tor.theta_dyn(t)?.value).abs())
        }))
    }));
    let g = grid.clone();
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        Spec::new("torsion_trace_geo_top", "ϑ^geo(t) = ϑ^top(t)", 1e-9, GRID_DESC).finish(max_over(&g, |t| {
            Ok((tor.theta_geo(t)?.value - tor.theta_top(t)?.value).abs())
        }))
    }));
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        Spec::new("zeta_value_at_zero", "Z(0) = −χ'(M,ρ)", 1e-9, "s = 0").finish(
            tor.zeta(Complex64::new(0.0, 0.0))
                .map(|z| (z - Complex64::new(-(data.chi_prime() as f64), 0.0)).norm()),
        )
    }));
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        let h = 1e-5;
        let outcome = (|| {
            let plus = tor.zeta(Complex64::new(0.5 + h, 0.0))? * h;
            let minus = tor.zeta(Complex64::new(0.5 - h, 0.0))? * (-h);
            let want = data.euler() * f64::from(data.dim()) * data.fiber_length() / (2.0 * PI);
            Ok((0.5 * (plus + minus) - Complex64::new(want, 0.0)).norm())
        })();
        Spec::new(
            "zeta_residue_half",
            "(s − ½)Z(s) → χ(N)·dim V·ℓ(f)/2π as s → ½",
            1e-6,
            "s = ½ ± 1e−5",
        )
        .finish(outcome)
    }));
    let st = strip.clone();
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        Spec::new(
            "zeta_mellin_duality",
            "Γ(s)Z(s) = 2^{−2s}π^{−½}Γ(½ − s)Z^dyn(s)",
            1e-8,
            "10 seeded s, Re s ∈ [−1.4, −0.1]",
        )
        .finish(max_over(&st, |s| {
            let lhs = gamma_complex(s)? * tor.zeta(s)?;
            let (zd, _) = tor.zeta_dyn(s)?;
            let rhs = (-2.0 * s * 2f64.ln()).exp() / PI.sqrt() * gamma_complex(0.5 - s)? * zd;
            Ok((lhs - rhs).norm() / lhs.norm().max(1e-300))
        }))
    }));
    let st = strip;
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        Spec::new(
            "zeta_compact_duality",
            "2Γ(2s)cos(πs)Z(s) = Z^dyn(s)",
            1e-8,
            "10 seeded s, Re s ∈ [−1.4, −0.1]",
        )
        .finish(max_over(&st, |s| {
            let lhs = 2.0 * gamma_complex(2.0 * s)? * (PI * s).cos() * tor.zeta(s)?;
            let (zd, _) = tor.zeta_dyn(s)?;
            Ok((lhs - zd).norm() / zd.norm().max(1e-300))
        }))
    }));
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        let outcome = (|| {
            let a = tor.torsion_from_zeta()?.value;
            let b = tor.torsion_closed_form()?.value;
            Ok((a - b).abs() / b.abs())
        })();
        Spec::new(
            "torsion_closed_form",
            "exp(−½Z'(0)) = product formula over eigenangles and exceptional orders",
            1e-8,
            "relative",
        )
        .finish(outcome)
    }));
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        let outcome = (|| {
            let fd = tor.zeta_derivative_finite_difference(1e-4)?;
            let an = tor.zeta_derivative_at_zero()?;
            Ok((fd - an).abs() / an.abs().max(1.0))
        })();
        Spec::new(
            "zeta_derivative_cross_check",
            "analytic Z'(0) = central difference of Z at 0",
            1e-6,
            "step 1e−4",
        )
        .finish(outcome)
    }));
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        let outcome = (|| {
            let f = tor.fuller_measure()?;
            let ln_t = tor.log_torsion_closed_form()?;
            let pole = (f.pole_coefficient - data.chi_prime() as f64).abs();
            Ok(((-0.5 * f.value - ln_t).abs() / ln_t.abs().max(1.0)).max(pole))
        })();
        Spec::new(
            "fuller_measure",
            "−½·(lim_{s→0}(Z^dyn(s) + χ'/s) − 2γχ') = ln T_Q",
            1e-8,
            "s → 0",
        )
        .finish(outcome)
    }));
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        let window = spectral_window(data);
        let outcome = (|| {
            for &lambda in &window {
                tor.index_dh(lambda)?;
            }
            Ok(0.0)
        })();
        Spec::new(
            "index_dh_integral",
            "ind(λ) ∈ ℤ on the iT-spectrum",
            0.0,
            "spectral points |λ̂| ≤ 24",
        )
        .finish(outcome)
    }));
    let g = grid;
    jobs.push(Box::new(move || {
        let tor = Torsion::new(data, cfg);
        let outcome = (|| {
            let mut worst: f64 = 0.0;
            for factor in HOMOGENEITY_FACTORS {
                let scaled = rescale(data, factor)?;
                let tor2 = Torsion::new(&scaled, cfg);
                for &t in &g {
                    for method in [TorsionMethod::Geo, TorsionMethod::Dyn, TorsionMethod::Top] {
                        let a = tor.heat_trace(method, t)?.value;
                        let b = tor2.heat_trace(method, factor * factor * t)?.value;
                        worst = worst.max((a - b).abs() / a.abs().max(1.0));
                    }
                }
            }
            Ok(worst)
        })();
        Spec::new(
            "torsion_homogeneity",
            "ϑ(t) unchanged under (ℓ, t) ↦ (cℓ, c²t)",
            1e-12,
            format!("c ∈ {{0.5, 3}} × {GRID_DESC}"),
        )
        .finish(outcome)
    }));
    jobs
}

fn eta_jobs<'a>(data: &'a Dataset, cfg: PrecisionConfig) -> Vec<Job<'a>> {
    let grid = log_grid();
    let mut jobs: Vec<Job<'a>> = Vec::new();

    let g = grid.clone();
    jobs.push(Box::new(move || {
        let outcome = Eta::new(data, cfg).and_then(|eta| {
            max_over(&g, |t| {
                let (a, _) = eta.theta_s_top_complex(t)?;
                let (b, _) = eta.theta_s_dyn_complex(t)?;
                Ok((a - b).norm())
            })
        });
        Spec::new("eta_trace_top_dyn", "ϑ_S^top(t) = ϑ_S^dyn(t)", 1e-9, GRID_DESC).finish(outcome)
    }));
    jobs.push(Box::new(move || {
        let outcome = Eta::new(data, cfg).and_then(|eta| {
            let g = eta.eta0_geo()?.value;
            let d = eta.eta0_dyn()?.value;
            let z = eta.eta0_zeta()?.value;
            Ok((g - d).abs().max((g - z).abs()).max((d - z).abs()))
        });
        Spec::new(
            "eta_invariant_agreement",
            "η(0): Bernoulli formula = orbit atoms = Hurwitz–Lerch η(s) at 0",
            1e-8,
            "pairwise",
        )
        .finish(outcome)
    }));
    jobs.push(Box::new(move || {
        let samples = [
            Complex64::new(-0.35, 0.0),
            Complex64::new(-0.8, 0.6),
            Complex64::new(-1.25, -0.3),
        ];
        let outcome = Eta::new(data, cfg).and_then(|eta| {
            max_over(&samples, |s| {
                let a = eta.eta_function(s)?;
                let (b, _) = eta.eta_function_dyn(s)?;
                Ok((a - b).norm() / a.norm().max(1.0))
            })
        });
        Spec::new(
            "eta_function_continuation",
            "Γ(s+½)η(s) = Γ(1−s)4^{−s}π^{−½}Σ_γ χ(γ)η(γ)(s)",
            1e-8,
            "s ∈ {−0.35, −0.8+0.6i, −1.25−0.3i}",
        )
        .finish(outcome)
    }));
    jobs.push(Box::new(move || {
        let outcome = Eta::new(data, cfg).and_then(|eta| {
            let two_sided = |p: f64, h: f64| -> Result<Complex64> {
                Ok(0.5
                    * (h * eta.eta_function(Complex64::new(p + h, 0.0))?
                        - h * eta.eta_function(Complex64::new(p - h, 0.0))?))
            };
            let h = 1e-4;
            let mut worst: f64 = 0.0;
            for p in 1..=eta.k() {
                let res = eta.eta_residue(p)?;
                let pf = f64::from(p);
                let extrapolated = (4.0 * two_sided(pf, 0.5 * h)? - two_sided(pf, h)?) / 3.0;
                worst = worst.max((extrapolated - Complex64::new(res.eta, 0.0)).norm());
            }
            Ok(worst)
        });
        Spec::new(
            "eta_residues",
            "Res_{s=p} η = −κ_{2p−1}·dim V/(2p−1)!·ℓ(f)/2π",
            1e-6,
            "s = p ± {1e−4, 5e−5} with Richardson step, p = 1..k",
        )
        .finish(outcome)
    }));
    let g = grid.clone();
    jobs.push(Box::new(move || {
        let outcome = Eta::new(data, cfg).and_then(|eta| {
            let mut worst: f64 = 0.0;
            for factor in HOMOGENEITY_FACTORS {
                let scaled = rescale(data, factor)?;
                let eta2 = Eta::new(&scaled, cfg)?;
                for &t in &g {
                    let t2 = factor * factor * t;
                    let a = eta.theta_s_top(t)?.value;
                    let b = eta2.theta_s_top(t2)?.value;
                    let c = eta.theta_s_dyn(t)?.value;
                    let d = eta2.theta_s_dyn(t2)?.value;
                    worst = worst
                        .max((a - b).abs() / a.abs().max(1.0))
                        .max((c - d).abs() / c.abs().max(1.0));
                }
            }
            Ok(worst)
        });
        Spec::new(
            "eta_homogeneity",
            "ϑ_S(t) unchanged under (ℓ, κ_m, t) ↦ (cℓ, c^m κ_m, c²t)",
            1e-12,
            format!("c ∈ {{0.5, 3}} × {GRID_DESC}"),
        )
        .finish(outcome)
    }));
    let g = grid.clone();
    jobs.push(Box::new(move || {
        let outcome = Eta::new(data, cfg).and_then(|eta| {
            let rel = |z: Complex64| z.im.abs() / z.norm().max(1.0);
            let mut worst = max_over(&g, |t| {
                let (a, _) = eta.theta_s_top_complex(t)?;
                let (b, _) = eta.theta_s_dyn_complex(t)?;
                Ok(rel(a).max(rel(b)))
            })?;
            for r in [eta.eta0_geo()?, eta.eta0_dyn()?, eta.eta0_zeta()?] {
                worst = worst.max(r.imaginary_residue);
            }
            for s in [-0.75, 0.25, 2.5] {
                worst = worst.max(rel(eta.eta_function(Complex64::new(s, 0.0))?));
            }
            Ok(worst)
        });
        Spec::new(
            "eta_realness",
            "Im ϑ_S = Im η(0) = Im η(s) = 0 for real s, relative to max(1, |value|)",
            1e-10,
            format!("{GRID_DESC}; s ∈ {{−0.75, 0.25, 2.5}}"),
        )
        .finish(outcome)
    }));
    jobs.push(Box::new(move || {
        let window = spectral_window(data);
        let outcome = Eta::new(data, cfg).and_then(|eta| {
            max_over(&window, |lambda| {
                let z = eta.index_sig_complex(lambda)?;
                Ok((z.re - z.re.round()).abs().max(z.im.abs()))
            })
        });
        Spec::new(
            "index_sig_integrality",
            "⟨ch(V_λ) ∧ 𝓛(N)_orb, [N]⟩_orb ∈ ℤ",
            crate::eta::INTEGRALITY_TOL,
            "spectral points |λ̂| ≤ 24",
        )
        .finish(outcome)
    }));
    jobs.push(Box::new(move || {
        let times = [0.1, 1.0, 8.0];
        let outcome = Eta::new(data, cfg).and_then(|eta| {
            let mut sites = vec![ChSite::Smooth];
            for j in 0..data.exceptional_count() {
                for r in 1..i64::from(data.alpha(j)) {
                    sites.push(ChSite::Exceptional { j, r });
                }
            }
            let mut worst: f64 = 0.0;
            for &t in &times {
                for parity in [Parity::Even, Parity::Odd] {
                    for &site in &sites {
                        let a = eta.ch_theta(parity, site, t, ChMode::Spectral)?;
                        let b = eta.ch_theta(parity, site, t, ChMode::Dual)?;
                        let dev = match (a, b) {
                            (ChValue::Series(a), ChValue::Series(b)) => (0..a.len())
                                .map(|m| (a.coeff(m) - b.coeff(m)).norm() / a.coeff(m).norm().max(1.0))
                                .fold(0.0, f64::max),
                            (ChValue::Scalar(a), ChValue::Scalar(b)) => (a - b).norm() / a.norm().max(1.0),
                            _ => f64::INFINITY,
                        };
                        worst = worst.max(dev);
                    }
                }
            }
            Ok(worst)
        });
        Spec::new(
            "chern_character_duality",
            "θ-regularized Chern characters: spectral sum = orbit sum, per c-degree",
            1e-10,
            "t ∈ {0.1, 1, 8}, both parities, all sites",
        )
        .finish(outcome)
    }));
    jobs
}

/// Runs every check on `data`. Checks run in parallel; the report keeps a
/// fixed order.
pub fn run_suite(data: &Dataset, cfg: &PrecisionConfig) -> VerificationReport {
    let cfg = *cfg;
    let mut jobs = torsion_jobs(data, cfg);
    jobs.extend(eta_jobs(data, cfg));
    let checks: Vec<Check> = jobs.par_iter().map(|job| job()).collect();
    VerificationReport {
        checks,
        fingerprint: fingerprint(data, &cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = log_grid();
        assert_eq!(g.len(), 20);
        assert!((g[0] - 0.05).abs() < 1e-15);
        assert!((g[19] - 20.0).abs() < 1e-12);
    }

    #[test]
    fn strip_samples_avoid_poles() {
        let s = strip_samples();
        assert_eq!(s.len(), 10);
        for z in s {
            assert!((-1.4..=-0.1).contains(&z.re));
            assert!((z + 0.5).norm() >= 0.05 && (z + 1.0).norm() >= 0.05);
        }
    }

    #[test]
    fn hopf_passes_everything() {
        let report = run_suite(&examples::hopf(), &PrecisionConfig::default());
        for c in &report.checks {
            assert_eq!(c.status, CheckStatus::Pass, "{c:?}");
        }
        assert_eq!(report.fingerprint.len(), 64);
    }

    #[test]
    fn corrupted_kappa_fails_integrality_only() {
        let report = run_suite(&examples::corrupted_kappa(), &PrecisionConfig::default());
        let failed: Vec<&str> = report.failed().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["index_sig_integrality"]);
    }

    #[test]
    fn skipped_without_eta_data() {
        let mut s = examples::hopf().seifert().clone();
        s.k = None;
        s.kappa.clear();
        let d = Dataset::new(s, examples::hopf().rep().clone()).unwrap();
        let report = run_suite(&d, &PrecisionConfig::default());
        assert!(report.passed());
        assert_eq!(report.check("eta_trace_top_dyn").unwrap().status, CheckStatus::Skipped);
        assert_eq!(report.check("torsion_trace_geo_dyn").unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn report_is_deterministic() {
        let d = random_dataset(7);
        let a = run_suite(&d, &PrecisionConfig::default());
        let b = run_suite(&d, &PrecisionConfig::default());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
