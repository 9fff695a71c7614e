use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{expm1_complex, SpecFunError};

/// Largest n accepted by [`bernoulli_number`] and [`bernoulli_polynomial`].
pub const MAX_BERNOULLI_INDEX: usize = 64;

struct Table {
    numbers: Vec<f64>,
    binomials: Vec<Vec<f64>>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n_max = MAX_BERNOULLI_INDEX;
        let mut binom = vec![vec![BigInt::zero(); n_max + 2]; n_max + 2];
        for n in 0..=n_max + 1 {
            binom[n][0] = BigInt::one();
            for k in 1..=n {
                binom[n][k] = &binom[n - 1][k - 1] + &binom[n - 1][k];
            }
        }
        // B_m = −1/(m+1) Σ_{k<m} C(m+1, k) B_k, with B_1 = −1/2.
        let mut exact: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        exact.push(BigRational::one());
        for m in 1..=n_max {
            let mut acc = BigRational::zero();
            for (k, bk) in exact.iter().enumerate() {
                acc += BigRational::from_integer(binom[m + 1][k].clone()) * bk;
            }
            exact.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        Table {
            numbers: exact.iter().map(|b| b.to_f64().unwrap_or(f64::NAN)).collect(),
            binomials: binom
                .iter()
                .map(|row| row.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
                .collect(),
        }
    })
}

/// Bernoulli number B_n with the convention B_1 = −1/2.
pub fn bernoulli_number(n: usize) -> Result<f64, SpecFunError> {
    if n > MAX_BERNOULLI_INDEX {
        return Err(SpecFunError::OutOfRange {
            function: "bernoulli_number",
            index: n,
            max: MAX_BERNOULLI_INDEX,
        });
    }
    Ok(table().numbers[n])
}

/// B_n(x) = Σ_k C(n,k) B_k x^{n−k}.
pub fn bernoulli_polynomial(n: usize, x: f64) -> Result<f64, SpecFunError> {
    if n > MAX_BERNOULLI_INDEX {
        return Err(SpecFunError::OutOfRange {
            function: "bernoulli_polynomial",
            index: n,
            max: MAX_BERNOULLI_INDEX,
        });
    }
    let t = table();
    // Horner in x over coefficients C(n,k) B_k of x^{n−k}.
    let mut acc = 0.0;
    for k in 0..=n {
        acc = acc * x + t.binomials[n][k] * t.numbers[k];
    }
    Ok(acc)
}

/// e^{tx} / (e^t − 1).
pub fn bernoulli_gen_ratio(t: Complex64, x: f64) -> Result<Complex64, SpecFunError> {
    let denom = expm1_complex(t);
    let on_lattice = t.re == 0.0 && {
        let k = t.im / (2.0 * std::f64::consts::PI);
        (k - k.round()).abs() <= 4.0 * f64::EPSILON * k.abs().max(1.0)
    };
    if on_lattice || denom == Complex64::new(0.0, 0.0) {
        return Err(SpecFunError::Domain {
            function: "bernoulli_gen_ratio",
            reason: format!("e^t = 1 at t = {t}"),
        });
    }
    Ok((t * x).exp() / denom)
}
