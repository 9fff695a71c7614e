use num_complex::Complex64;

use super::{bernoulli_number, SpecFunError};

const STIRLING_TERMS: usize = 14;
const SHIFT_TARGET: f64 = 12.0;

fn check_pole(function: &'static str, s: Complex64) -> Result<(), SpecFunError> {
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        return Err(SpecFunError::Pole { function, at: s });
    }
    Ok(())
}

/// Stirling series for ln Γ(z), accurate once Re z ≥ 12.
fn stirling(z: Complex64) -> Complex64 {
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let mut acc = (z - 0.5) * z.ln() - z + half_ln_2pi;
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for k in 1..=STIRLING_TERMS {
        let b = bernoulli_number(2 * k).expect("table covers Stirling terms");
        acc += pow * (b / ((2 * k) as f64 * (2 * k - 1) as f64));
        pow *= inv2;
    }
    acc
}

fn shift_for(s: Complex64) -> usize {
    if s.re >= SHIFT_TARGET {
        0
    } else {
        (SHIFT_TARGET - s.re).ceil() as usize
    }
}

/// ln Γ(s) as ln Γ(s+N) − Σ_{k<N} ln(s+k) with principal logarithms.
///
/// Agrees with the principal branch of ln Γ for Re s > 0; elsewhere it is a
/// continuous branch off the negative real axis, so `exp` always recovers Γ(s).
pub fn log_gamma(s: Complex64) -> Result<Complex64, SpecFunError> {
    check_pole("log_gamma", s)?;
    let n = shift_for(s);
    let mut acc = stirling(s + n as f64);
    for k in 0..n {
        acc -= (s + k as f64).ln();
    }
    Ok(acc)
}

/// Γ(s) for complex s.
pub fn gamma_complex(s: Complex64) -> Result<Complex64, SpecFunError> {
    check_pole("gamma", s)?;
    let n = shift_for(s);
    let mut denom = Complex64::new(1.0, 0.0);
    for k in 0..n {
        denom *= s + k as f64;
    }
    Ok(stirling(s + n as f64).exp() / denom)
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma_real(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain {
            function: "ln_gamma_real",
            reason: format!("x must be positive, got {x}"),
        });
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn half_is_sqrt_pi() {
        let g = gamma_complex(c(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() / PI.sqrt() < 1e-14);
        assert!(g.im.abs() < 1e-16);
    }

    #[test]
    fn integer_factorials() {
        let mut f = 1.0;
        for n in 1..=20 {
            let g = gamma_complex(c(n as f64, 0.0)).unwrap();
            assert!((g.re - f).abs() / f < 1e-14, "n={n}");
            f *= n as f64;
        }
    }

    #[test]
    fn recurrence() {
        let s = c(0.3, 2.0);
        let lhs = gamma_complex(s + 1.0).unwrap();
        let rhs = s * gamma_complex(s).unwrap();
        assert!(rel(lhs, rhs) < 1e-13);
    }

    #[test]
    fn duplication() {
        for s in [c(0.7, 0.0), c(-1.3, 0.4), c(2.2, -3.1)] {
            let lhs = gamma_complex(s).unwrap() * gamma_complex(s + 0.5).unwrap();
            let rhs = ((1.0 - 2.0 * s) * 2f64.ln()).exp() * PI.sqrt() * gamma_complex(2.0 * s).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "s={s}");
        }
    }

    #[test]
    fn imaginary_axis_modulus() {
        for y in [0.5, 1.0, 3.0, 7.5] {
            let g = gamma_complex(c(0.0, y)).unwrap();
            let want = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() - want).abs() / want < 1e-13, "y={y}");
            let h = gamma_complex(c(0.5, y)).unwrap();
            let want = PI / (PI * y).cosh();
            assert!((h.norm_sqr() - want).abs() / want < 1e-13, "y={y}");
        }
    }

    #[test]
    fn reflection_on_strip() {
        for &re in &[-9.7, -4.25, -0.5, 0.3, 2.6, 8.1] {
            for &im in &[-9.0, -1.5, 0.0, 0.75, 6.0] {
                let s = c(re, im);
                let lhs = gamma_complex(s).unwrap() * gamma_complex(1.0 - s).unwrap() * (PI * s).sin();
                assert!((lhs - c(PI, 0.0)).norm() / PI < 1e-11, "s={s}");
            }
        }
    }

    #[test]
    fn log_gamma_exponentiates_to_gamma() {
        for s in [c(0.2, 0.1), c(-3.4, 2.0), c(5.0, -8.0)] {
            let a = log_gamma(s).unwrap().exp();
            let b = gamma_complex(s).unwrap();
            assert!(rel(a, b) < 1e-13);
        }
    }

    #[test]
    fn ln_gamma_real_values() {
        assert!(ln_gamma_real(1.0).unwrap().abs() < 1e-14);
        assert!(ln_gamma_real(2.0).unwrap().abs() < 1e-14);
        assert!((ln_gamma_real(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(ln_gamma_real(0.0).is_err());
    }

    #[test]
    fn poles_are_distinct_errors() {
        for n in 0..5 {
            match gamma_complex(c(-(n as f64), 0.0)) {
                Err(SpecFunError::Pole { .. }) => {}
                other => panic!("expected pole, got {other:?}"),
            }
        }
        assert!(gamma_complex(c(-1.0, 1e-12)).is_ok());
    }
}
