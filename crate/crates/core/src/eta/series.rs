use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Σ_m c_m·c^m in the symbol c, truncated above degree 2k − 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NilpotentSeries {
    coefficients: Vec<Complex64>,
}

impl NilpotentSeries {
    pub fn zero(k: u32) -> Self {
        Self {
            coefficients: vec![Complex64::new(0.0, 0.0); 2 * k as usize],
        }
    }

    pub fn constant(k: u32, value: Complex64) -> Self {
        let mut s = Self::zero(k);
        s.coefficients[0] = value;
        s
    }

    /// a + b·c.
    pub fn linear(k: u32, a: Complex64, b: Complex64) -> Self {
        let mut s = Self::constant(k, a);
        if s.coefficients.len() > 1 {
            s.coefficients[1] = b;
        }
        s
    }

    pub fn from_coefficients(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() || !coefficients.len().is_multiple_of(2) {
            return Err(Error::domain(
                "NilpotentSeries",
                format!("length must be a positive even number 2k, got {}", coefficients.len()),
            ));
        }
        Ok(Self { coefficients })
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn k(&self) -> u32 {
        (self.coefficients.len() / 2) as u32
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coeff(&self, m: usize) -> Complex64 {
        self.coefficients.get(m).copied().unwrap_or_default()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|c| c * z).collect(),
        }
    }

    fn assert_same_len(&self, other: &Self) {
        assert_eq!(
            self.len(),
            other.len(),
            "NilpotentSeries operands must share the same k"
        );
    }

    /// d/dc; the top coefficient becomes zero.
    pub fn derivative(&self) -> Self {
        let n = self.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for m in 1..n {
            out[m - 1] = self.coefficients[m] * m as f64;
        }
        Self { coefficients: out }
    }

    /// e^{c_0}·Σ_j N^j/j! with N the nilpotent part; exact in the truncation.
    pub fn exp(&self) -> Self {
        let n = self.len();
        let head = self.coefficients[0].exp();
        let mut nil = self.clone();
        nil.coefficients[0] = Complex64::new(0.0, 0.0);
        let mut acc = Self::constant(self.k(), Complex64::new(1.0, 0.0));
        let mut power = acc.clone();
        for j in 1..n {
            power = &power * &nil;
            acc = &acc + &power.scale(Complex64::new(1.0 / factorial(j), 0.0));
        }
        acc.scale(head)
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl Add for &NilpotentSeries {
    type Output = NilpotentSeries;
    fn add(self, rhs: Self) -> NilpotentSeries {
        self.assert_same_len(rhs);
        NilpotentSeries {
            coefficients: self.coefficients.iter().zip(&rhs.coefficients).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &NilpotentSeries {
    type Output = NilpotentSeries;
    fn sub(self, rhs: Self) -> NilpotentSeries {
        self.assert_same_len(rhs);
        NilpotentSeries {
            coefficients: self.coefficients.iter().zip(&rhs.coefficients).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &NilpotentSeries {
    type Output = NilpotentSeries;
    fn mul(self, rhs: Self) -> NilpotentSeries {
        self.assert_same_len(rhs);
        let n = self.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        NilpotentSeries { coefficients: out }
    }
}

impl Neg for &NilpotentSeries {
    type Output = NilpotentSeries;
    fn neg(self) -> NilpotentSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_odd_length() {
        assert!(NilpotentSeries::from_coefficients(vec![c(1.0, 0.0); 3]).is_err());
        assert!(NilpotentSeries::from_coefficients(vec![]).is_err());
        assert_eq!(NilpotentSeries::zero(3).len(), 6);
    }

    #[test]
    fn product_truncates() {
        // (1 + c)(1 + c) = 1 + 2c + c² with c² dropped at k = 1.
        let s = NilpotentSeries::linear(1, c(1.0, 0.0), c(1.0, 0.0));
        let p = &s * &s;
        assert_eq!(p.coefficients(), &[c(1.0, 0.0), c(2.0, 0.0)]);
        let s2 = NilpotentSeries::linear(2, c(1.0, 0.0), c(1.0, 0.0));
        let p2 = &s2 * &s2;
        assert_eq!(p2.coefficients(), &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn exp_of_linear_is_taylor() {
        // e^{a + bc} = e^a Σ b^m c^m / m!
        let a = c(0.3, -0.2);
        let b = c(-1.1, 0.7);
        let e = NilpotentSeries::linear(3, a, b).exp();
        for m in 0..6 {
            let want = a.exp() * b.powu(m as u32) / factorial(m);
            assert!((e.coeff(m) - want).norm() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn exp_is_homomorphism() {
        let x = NilpotentSeries::from_coefficients(vec![c(0.1, 0.0), c(0.5, 0.2), c(-0.3, 0.0), c(0.0, 1.0)]).unwrap();
        let y = NilpotentSeries::from_coefficients(vec![c(-0.4, 0.3), c(0.0, -0.6), c(0.9, 0.0), c(0.2, 0.0)]).unwrap();
        let lhs = (&x + &y).exp();
        let rhs = &x.exp() * &y.exp();
        for m in 0..4 {
            assert!((lhs.coeff(m) - rhs.coeff(m)).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_of_exp() {
        // d/dc e^{bc} = b e^{bc} up to the truncated top degree.
        let b = c(0.0, 2.0);
        let e = NilpotentSeries::linear(2, c(0.0, 0.0), b).exp();
        let d = e.derivative();
        let want = e.scale(b);
        for m in 0..3 {
            assert!((d.coeff(m) - want.coeff(m)).norm() < 1e-14);
        }
        assert_eq!(d.coeff(3), c(0.0, 0.0));
    }
}
