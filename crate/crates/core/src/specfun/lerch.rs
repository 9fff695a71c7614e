use num_complex::Complex64;

use super::{hurwitz::shifted_zeta_regular, unit_phase, PrecisionConfig, SpecFunError};

/// L(e^{2πir/α}, s, x) = Σ_{n≥0} e^{2πirn/α} (n+x)^{−s}, entire in s.
///
/// Evaluated as α^{−s} Σ_m e^{2πirm/α} ζ(s, (m+x)/α) with each Hurwitz term
/// replaced by its regular part; the dropped poles sum to zero.
pub fn lerch_at_root_of_unity(
    r: i64,
    alpha: u32,
    s: Complex64,
    x: f64,
    cfg: &PrecisionConfig,
) -> Result<Complex64, SpecFunError> {
    if alpha < 2 {
        return Err(SpecFunError::Domain {
            function: "lerch_at_root_of_unity",
            reason: format!("alpha must be at least 2, got {alpha}"),
        });
    }
    let a = i64::from(alpha);
    let r = r.rem_euclid(a);
    if r == 0 {
        return Err(SpecFunError::Domain {
            function: "lerch_at_root_of_unity",
            reason: format!("r ≡ 0 mod {alpha}"),
        });
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(SpecFunError::Domain {
            function: "lerch_at_root_of_unity",
            reason: format!("x must lie in (0, 1], got {x}"),
        });
    }
    cfg.validate()?;
    let af = alpha as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..a {
        let phase = unit_phase(((r * m) % a) as f64 / af);
        acc += phase * shifted_zeta_regular(s, (m as f64 + x) / af, cfg);
    }
    Ok((-s * af.ln()).exp() * acc)
}
