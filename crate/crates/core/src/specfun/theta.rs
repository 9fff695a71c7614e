use std::f64::consts::PI;

use super::{PrecisionConfig, SpecFunError};

fn check_t(t: f64) -> Result<(), SpecFunError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(SpecFunError::Domain {
            function: "jacobi_theta",
            reason: format!("t must be positive, got {t}"),
        });
    }
    Ok(())
}

/// Smallest radius ρ with Σ_{u ∈ u0+ℤ, |u| > ρ} |u|^degree e^{−decay·u²} < tol.
///
/// The bound is uniform in the lattice offset u0: it counts two one-sided
/// geometric tails starting at the first point beyond ρ.
pub fn gaussian_cutoff(decay: f64, degree: u32, tol: f64) -> f64 {
    assert!(decay > 0.0 && tol > 0.0, "gaussian_cutoff needs positive decay and tol");
    let d = degree as f64;
    let tail = |rho: f64| -> f64 {
        let head = rho.powf(d) * (-decay * rho * rho).exp();
        let q = ((rho + 1.0) / rho).powf(d) * (-decay * (2.0 * rho + 1.0)).exp();
        if q >= 1.0 {
            f64::INFINITY
        } else {
            2.0 * head / (1.0 - q)
        }
    };
    let floor = (d / (2.0 * decay)).sqrt().max(1.0);
    let guess = ((1.0 / tol).ln().max(1.0) / decay).sqrt();
    let mut rho = floor.max(0.5 * guess).ceil();
    while tail(rho) >= tol {
        rho += 1.0;
    }
    // Step back while still certified, so the radius is tight.
    while rho - 1.0 >= floor && tail(rho - 1.0) < tol {
        rho -= 1.0;
    }
    rho
}

/// Σ_n e^{−t(n+x)²} summed outward from the nearest lattice point.
pub fn jacobi_theta_direct(x: f64, t: f64, cfg: &PrecisionConfig) -> Result<f64, SpecFunError> {
    check_t(t)?;
    let x0 = x - x.round();
    let tol = cfg.tail_tol();
    let mut acc = (-t * x0 * x0).exp();
    for dir in [1.0, -1.0] {
        let mut m = 1.0;
        loop {
            let u = (m * dir + x0).abs();
            let term = (-t * u * u).exp();
            let ratio = (-t * (2.0 * u + 1.0)).exp();
            if term / (1.0 - ratio) < tol {
                break;
            }
            acc += term;
            m += 1.0;
        }
    }
    Ok(acc)
}

/// √(π/t) [1 + 2 Σ_{n≥1} cos(2πnx) e^{−π²n²/t}].
pub fn jacobi_theta_dual(x: f64, t: f64, cfg: &PrecisionConfig) -> Result<f64, SpecFunError> {
    check_t(t)?;
    let pref = (PI / t).sqrt();
    let tol = cfg.tail_tol();
    let frac = x - x.floor();
    let mut acc = 1.0;
    let mut n = 1.0;
    loop {
        let term = (-PI * PI * n * n / t).exp();
        let ratio = (-PI * PI * (2.0 * n + 1.0) / t).exp();
        if 2.0 * pref * term / (1.0 - ratio) < tol {
            break;
        }
        acc += 2.0 * (2.0 * PI * ((n * frac) % 1.0)).cos() * term;
        n += 1.0;
    }
    Ok(pref * acc)
}

/// Jacobi theta θ(x, t) = Σ_{n∈ℤ} e^{−t(n+x)²}; direct for t ≥ 1, dual below.
pub fn jacobi_theta(x: f64, t: f64, cfg: &PrecisionConfig) -> Result<f64, SpecFunError> {
    if t >= 1.0 {
        jacobi_theta_direct(x, t, cfg)
    } else {
        jacobi_theta_dual(x, t, cfg)
    }
}
