//! Scalar special functions with analytic continuation.
//!
//! Everything the invariant computations need reduces to a finite
//! combination of the functions here:
//!
//! | Function | Value |
//! |----------|-------|
//! | [`bernoulli_polynomial`] | B_n(x) |
//! | [`bernoulli_gen_ratio`] | e^{tx} / (e^t − 1) |
//! | [`jacobi_theta`] | θ(x, t) = Σ_n e^{−t(n+x)²} |
//! | [`hurwitz_zeta`] | ζ(s, x), continued to s ≠ 1 |
//! | [`hurwitz_zeta_s_derivative_at_zero`] | ∂_s ζ(s, x) at s = 0 |
//! | [`lerch_at_root_of_unity`] | Σ_n z^n (n+x)^{−s} for z a root of unity |
//! | [`gamma_complex`], [`log_gamma`] | Γ(s), ln Γ(s) |
//! | [`unit_polylog`] | Σ_{n≥1} z^n n^{−w} for \|z\| = 1 by direct summation |
//!
//! All functions are pure; accuracy knobs live in [`PrecisionConfig`].

mod bernoulli;
mod dirichlet;
mod gamma;
mod hurwitz;
mod lerch;
mod theta;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bernoulli::{bernoulli_gen_ratio, bernoulli_number, bernoulli_polynomial, MAX_BERNOULLI_INDEX};
pub use dirichlet::{unit_polylog, unit_polylog_finite_part, DirichletSum};
pub use gamma::{gamma_complex, log_gamma, ln_gamma_real};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_regular, hurwitz_zeta_s_derivative_at_zero};
pub use lerch::lerch_at_root_of_unity;
pub use theta::{gaussian_cutoff, jacobi_theta, jacobi_theta_direct, jacobi_theta_dual};


/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Errors from special function evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    /// Evaluation requested exactly at a pole.
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: Complex64 },
    /// Argument outside the function's domain.
    #[error("{function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },
    /// A truncated series failed its self-consistency check.
    #[error("{function}: series did not settle, estimated error {bound:e}")]
    NonConvergence { function: &'static str, bound: f64 },
    /// Index above the supported table size.
    #[error("{function}: index {index} exceeds the supported maximum {max}")]
    OutOfRange {
        function: &'static str,
        index: usize,
        max: usize,
    },
}

/// Accuracy settings shared by every series truncation in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PrecisionConfig {
    /// Absolute tolerance every truncated tail must stay under.
    pub target_abs_tol: f64,
    /// Number of Bernoulli correction terms in Euler–Maclaurin summation.
    pub euler_maclaurin_terms: usize,
    /// Padding factor (≥ 1) applied to truncation bounds.
    pub series_guard_factor: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self {
            target_abs_tol: 1e-12,
            euler_maclaurin_terms: 12,
            series_guard_factor: 10.0,
        }
    }
}

impl PrecisionConfig {
    /// Largest supported Euler–Maclaurin depth (needs B_{2M+2} from the table).
    pub const MAX_EULER_MACLAURIN_TERMS: usize = (MAX_BERNOULLI_INDEX - 2) / 2;

    pub fn validate(&self) -> Result<(), SpecFunError> {
        if !(self.target_abs_tol > 0.0 && self.target_abs_tol.is_finite()) {
            return Err(SpecFunError::Domain {
                function: "PrecisionConfig",
                reason: format!("target_abs_tol must be positive, got {}", self.target_abs_tol),
            });
        }
        if self.euler_maclaurin_terms < 2
            || self.euler_maclaurin_terms > Self::MAX_EULER_MACLAURIN_TERMS
        {
            return Err(SpecFunError::Domain {
                function: "PrecisionConfig",
                reason: format!(
                    "euler_maclaurin_terms must lie in [2, {}], got {}",
                    Self::MAX_EULER_MACLAURIN_TERMS,
                    self.euler_maclaurin_terms
                ),
            });
        }
        if !(self.series_guard_factor >= 1.0) {
            return Err(SpecFunError::Domain {
                function: "PrecisionConfig",
                reason: format!(
                    "series_guard_factor must be at least 1, got {}",
                    self.series_guard_factor
                ),
            });
        }
        Ok(())
    }

    /// Tolerance a single truncated tail is held to.
    pub(crate) fn tail_tol(&self) -> f64 {
        self.target_abs_tol / self.series_guard_factor
    }
}

/// e^z − 1 without cancellation for small |z|.
pub fn expm1_complex(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    let half_sin = (0.5 * b).sin();
    Complex64::new(
        a.exp_m1() * b.cos() - 2.0 * half_sin * half_sin,
        a.exp() * b.sin(),
    )
}

/// e^{2πi x}, reduced mod 1 first so large arguments keep their accuracy.
pub fn unit_phase(x: f64) -> Complex64 {
    let frac = x - x.floor();
    let angle = 2.0 * std::f64::consts::PI * frac;
    Complex64::new(angle.cos(), angle.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        PrecisionConfig::default().validate().unwrap();
    }

    #[test]
    fn config_rejects_bad_values() {
        let mut cfg = PrecisionConfig::default();
        cfg.target_abs_tol = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = PrecisionConfig::default();
        cfg.euler_maclaurin_terms = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = PrecisionConfig::default();
        cfg.series_guard_factor = 0.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn expm1_matches_exp_minus_one_away_from_zero() {
        let z = Complex64::new(0.7, -1.3);
        assert!((expm1_complex(z) - (z.exp() - 1.0)).norm() < 1e-15);
        let tiny = Complex64::new(1e-10, 2e-10);
        assert!((expm1_complex(tiny) - tiny).norm() < 1e-19);
    }

    #[test]
    fn unit_phase_reduces_argument() {
        let z = unit_phase(1e6 + 0.25);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-9);
    }
}
