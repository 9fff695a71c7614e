use num_complex::Complex64;

use super::{bernoulli_number, expm1_complex, ln_gamma_real, PrecisionConfig, SpecFunError};

/// |B_{2k}/(2k)!| · |(s)_{2k−1}| · b^{−Re s−2k+1}, the size of the k-th correction.
fn correction_size(s: Complex64, b: f64, k: usize) -> f64 {
    let mut poch = 1.0;
    for i in 0..(2 * k - 1) {
        poch *= (s + i as f64).norm();
    }
    let mut fact = 1.0;
    for i in 1..=(2 * k) {
        fact *= i as f64;
    }
    let bern = bernoulli_number(2 * k).expect("depth validated").abs();
    bern / fact * poch * b.powf(-s.re - (2 * k) as f64 + 1.0)
}

fn leading_terms(s: Complex64, a: f64, cfg: &PrecisionConfig) -> usize {
    let base = 15usize.max(s.im.abs().ceil() as usize);
    if s.re >= 0.0 {
        return base;
    }
    // Fewer leading terms keep the partial sum and tail small when Re s < 0.
    let target = cfg.tail_tol();
    let next = cfg.euler_maclaurin_terms + 1;
    (0..=base)
        .find(|&n| correction_size(s, a + n as f64, next) < target)
        .unwrap_or(base)
}

/// (b^{1−s} − 1)/(s − 1), continuous through s = 1.
fn pole_piece(s: Complex64, b: f64) -> Complex64 {
    let ln_b = b.ln();
    let u = (1.0 - s) * ln_b;
    let ratio = if u.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        expm1_complex(u) / u
    };
    -ln_b * ratio
}

/// ζ(s, a) − 1/(s − 1) for any a > 0.
pub(crate) fn shifted_zeta_regular(
    s: Complex64,
    a: f64,
    cfg: &PrecisionConfig,
) -> Complex64 {
    let n = leading_terms(s, a, cfg);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        acc += (-s * (a + i as f64).ln()).exp();
    }
    let b = a + n as f64;
    let ln_b = b.ln();
    let b_pow = (-s * ln_b).exp();
    acc += pole_piece(s, b) + 0.5 * b_pow;
    // Σ_k B_{2k}/(2k)! (s)_{2k−1} b^{−s−2k+1}
    let mut poch = s;
    let mut fact = 2.0;
    let mut power = b_pow / b;
    for k in 1..=cfg.euler_maclaurin_terms {
        let bern = bernoulli_number(2 * k).expect("depth validated");
        acc += poch * power * (bern / fact);
        let j = (2 * k - 1) as f64;
        poch *= (s + j) * (s + j + 1.0);
        fact *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
        power /= b * b;
    }
    acc
}

fn check_x(function: &'static str, x: f64) -> Result<(), SpecFunError> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(SpecFunError::Domain {
            function,
            reason: format!("x must lie in (0, 1], got {x}"),
        });
    }
    Ok(())
}

/// ζ(s, x) − 1/(s − 1), entire in s.
pub fn hurwitz_zeta_regular(
    s: Complex64,
    x: f64,
    cfg: &PrecisionConfig,
) -> Result<Complex64, SpecFunError> {
    check_x("hurwitz_zeta_regular", x)?;
    cfg.validate()?;
    Ok(shifted_zeta_regular(s, x, cfg))
}

/// Hurwitz zeta ζ(s, x) = Σ_{n≥0} (n+x)^{−s}, continued to s ≠ 1.
pub fn hurwitz_zeta(s: Complex64, x: f64, cfg: &PrecisionConfig) -> Result<Complex64, SpecFunError> {
    check_x("hurwitz_zeta", x)?;
    if s == Complex64::new(1.0, 0.0) {
        return Err(SpecFunError::Pole {
            function: "hurwitz_zeta",
            at: s,
        });
    }
    cfg.validate()?;
    Ok(shifted_zeta_regular(s, x, cfg) + (s - 1.0).inv())
}

/// ∂_s ζ(s, x) at s = 0, equal to ln Γ(x) − ½ ln 2π.
pub fn hurwitz_zeta_s_derivative_at_zero(x: f64) -> Result<f64, SpecFunError> {
    check_x("hurwitz_zeta_s_derivative_at_zero", x)?;
    Ok(ln_gamma_real(x)? - 0.5 * (2.0 * std::f64::consts::PI).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bernoulli_polynomial, EULER_GAMMA};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn value_at_zero() {
        let v = hurwitz_zeta(c(0.0), 0.25, &cfg()).unwrap();
        assert!((v - c(0.25)).norm() < 1e-13);
    }

    #[test]
    fn riemann_zeta_two() {
        let v = hurwitz_zeta(c(2.0), 1.0, &cfg()).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn negative_one_at_half() {
        let v = hurwitz_zeta(c(-1.0), 0.5, &cfg()).unwrap();
        assert!((v.re - 1.0 / 24.0).abs() < 1e-13);
    }

    #[test]
    fn negative_integers_are_bernoulli() {
        for p in 0..=9 {
            for &x in &[0.05, 0.3, 0.5, 0.91, 1.0] {
                let v = hurwitz_zeta(c(-(p as f64)), x, &cfg()).unwrap();
                let want = -bernoulli_polynomial(p + 1, x).unwrap() / (p + 1) as f64;
                assert!((v.re - want).abs() < 1e-12, "p={p} x={x}: {} vs {want}", v.re);
            }
        }
    }

    #[test]
    fn direct_sum_agreement_in_convergent_region() {
        let s = Complex64::new(3.5, 2.0);
        let x = 0.37;
        let direct: Complex64 = (0..200_000)
            .rev()
            .map(|n| (-s * (n as f64 + x).ln()).exp())
            .sum();
        let v = hurwitz_zeta(s, x, &cfg()).unwrap();
        assert!((v - direct).norm() < 1e-12);
    }

    #[test]
    fn large_imaginary_part_matches_shift_identity() {
        let s = Complex64::new(0.5, 25.0);
        let x = 0.4;
        let lhs = hurwitz_zeta(s, x, &cfg()).unwrap();
        // ζ(s, x) = x^{−s} + ζ(s, x+1)
        let shifted = (-s * x.ln()).exp() + shifted_zeta_regular(s, x + 1.0, &cfg()) + (s - 1.0).inv();
        assert!((lhs - shifted).norm() < 1e-11);
    }

    #[test]
    fn regular_part_at_one_is_minus_digamma() {
        let r = hurwitz_zeta_regular(c(1.0), 1.0, &cfg()).unwrap();
        assert!((r.re - EULER_GAMMA).abs() < 1e-13);
        // −ψ(1/2) = γ + 2 ln 2
        let r = hurwitz_zeta_regular(c(1.0), 0.5, &cfg()).unwrap();
        assert!((r.re - (EULER_GAMMA + 2.0 * 2f64.ln())).abs() < 1e-13);
    }

    #[test]
    fn pole_and_domain_errors() {
        assert!(matches!(
            hurwitz_zeta(c(1.0), 0.5, &cfg()),
            Err(SpecFunError::Pole { .. })
        ));
        assert!(hurwitz_zeta(c(2.0), 0.0, &cfg()).is_err());
        assert!(hurwitz_zeta(c(2.0), 1.5, &cfg()).is_err());
    }

    #[test]
    fn residue_at_one() {
        let h = 1e-6;
        let v = hurwitz_zeta(c(1.0 + h), 0.3, &cfg()).unwrap();
        assert!((v.re * h - 1.0).abs() < 1e-5);
    }

    #[test]
    fn derivative_at_zero_values() {
        let v = hurwitz_zeta_s_derivative_at_zero(1.0).unwrap();
        assert!((v + 0.5 * (2.0 * PI).ln()).abs() < 1e-14);
        let v = hurwitz_zeta_s_derivative_at_zero(0.5).unwrap();
        assert!((v + 0.5 * 2f64.ln()).abs() < 1e-14);
        let x = 0.25;
        let pair = hurwitz_zeta_s_derivative_at_zero(x).unwrap()
            + hurwitz_zeta_s_derivative_at_zero(1.0 - x).unwrap();
        assert!((pair + (2.0 * (PI * x).sin()).ln()).abs() < 1e-14);
    }

    #[test]
    fn derivative_at_zero_matches_finite_difference() {
        let h = 1e-5;
        for &x in &[0.2, 0.5, 0.85] {
            let plus = hurwitz_zeta(c(h), x, &cfg()).unwrap().re;
            let minus = hurwitz_zeta(c(-h), x, &cfg()).unwrap().re;
            let fd = (plus - minus) / (2.0 * h);
            assert!((fd - hurwitz_zeta_s_derivative_at_zero(x).unwrap()).abs() < 1e-8);
        }
    }
}
