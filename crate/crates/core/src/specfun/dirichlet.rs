use std::sync::OnceLock;

use num_complex::Complex64;

use super::{hurwitz::shifted_zeta_regular, unit_phase, PrecisionConfig, SpecFunError};

const PHASE_TOL: f64 = 1e-12;
const MAX_TAIL_ORDER: usize = 60;
const MIN_TERMS: usize = 1000;
const MAX_TERMS: usize = 400_000;

/// S(n, k) for n, k ≤ MAX_TAIL_ORDER + 1, scaled by (k−1)! as used in Li_{−j}.
fn stirling_table() -> &'static Vec<Vec<f64>> {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n_max = MAX_TAIL_ORDER + 1;
        let mut s = vec![vec![0.0f64; n_max + 1]; n_max + 1];
        s[0][0] = 1.0;
        for n in 1..=n_max {
            for k in 1..=n {
                s[n][k] = k as f64 * s[n - 1][k] + s[n - 1][k - 1];
            }
        }
        // (k−1)! S(n, k)
        for row in s.iter_mut() {
            let mut fact = 1.0;
            for (k, v) in row.iter_mut().enumerate().skip(1) {
                if k > 1 {
                    fact *= (k - 1) as f64;
                }
                *v *= fact;
            }
        }
        s
    })
}

/// Σ_{m≥0} m^j z^m in the Abel sense, for z ≠ 1 on the unit circle.
fn geometric_moment(j: usize, z: Complex64) -> Complex64 {
    let one_minus = Complex64::new(1.0, 0.0) - z;
    if j == 0 {
        return one_minus.inv();
    }
    let u = z / one_minus;
    let row = &stirling_table()[j + 1];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pow = u;
    for coeff in row.iter().take(j + 2).skip(1) {
        acc += pow * *coeff;
        pow *= u;
    }
    acc
}

/// Σ_{m≥0} z^m (m+a)^{−w} by its large-a expansion, z ≠ 1.
fn oscillating_tail(z: Complex64, w: Complex64, a: f64, tol: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    // binom(−w, j) a^{−w−j}
    let mut factor = (-w * a.ln()).exp();
    let mut prev = f64::INFINITY;
    for j in 0..=MAX_TAIL_ORDER {
        let term = factor * geometric_moment(j, z);
        let size = term.norm();
        if j > 0 && size > prev {
            break;
        }
        acc += term;
        if size < tol {
            break;
        }
        prev = size;
        factor *= -(w + j as f64) / ((j + 1) as f64 * a);
    }
    acc
}

/// A Dirichlet series Σ_{n≥1} a_n n^{−w} with a_n = Σ_j c_j e^{2πi n φ_j}.
///
/// Evaluated by a direct partial sum plus asymptotic tails per phase, which
/// also gives the analytic continuation in w.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DirichletSum {
    atoms: Vec<(f64, Complex64)>,
}

fn normalize_phase(phase: f64) -> f64 {
    let f = phase - phase.floor();
    if f > 1.0 - PHASE_TOL {
        0.0
    } else {
        f
    }
}

impl DirichletSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds c·e^{2πi n φ} to every coefficient a_n.
    pub fn add(&mut self, phase: f64, coeff: Complex64) {
        let p = normalize_phase(phase);
        if let Some(slot) = self.atoms.iter_mut().find(|(q, _)| (q - p).abs() < PHASE_TOL) {
            slot.1 += coeff;
        } else {
            self.atoms.push((p, coeff));
        }
    }

    pub fn atoms(&self) -> &[(f64, Complex64)] {
        &self.atoms
    }

    pub fn coefficient(&self, n: u64) -> Complex64 {
        self.atoms
            .iter()
            .map(|&(p, c)| c * unit_phase(n as f64 * p))
            .sum()
    }

    /// Total weight on the non-oscillating phase; residue of the series at w = 1.
    pub fn pole_weight(&self) -> Complex64 {
        self.significant()
            .filter(|(p, _)| *p == 0.0)
            .map(|(_, c)| c)
            .sum()
    }

    fn significant(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        let scale = self.atoms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        self.atoms
            .iter()
            .copied()
            .filter(move |(_, c)| c.norm() > 1e-13 * scale)
    }

    fn terms_for(&self) -> usize {
        let gap = self
            .significant()
            .filter(|(p, _)| *p != 0.0)
            .map(|(p, _)| (Complex64::new(1.0, 0.0) - unit_phase(p)).norm())
            .fold(f64::INFINITY, f64::min);
        let n = if gap.is_finite() {
            (64.0 / gap).ceil() as usize
        } else {
            0
        };
        n.clamp(MIN_TERMS, MAX_TERMS / 2)
    }

    fn evaluate_at(&self, w: Complex64, n: usize, drop_pole: bool, cfg: &PrecisionConfig) -> Complex64 {
        let atoms: Vec<(f64, Complex64)> = self.significant().collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            let a_k: Complex64 = atoms.iter().map(|&(p, c)| c * unit_phase(k as f64 * p)).sum();
            acc += a_k * (-w * (k as f64).ln()).exp();
        }
        let a = (n + 1) as f64;
        let tol = cfg.tail_tol();
        for &(p, c) in &atoms {
            if p == 0.0 {
                let mut tail = shifted_zeta_regular(w, a, cfg);
                if !drop_pole {
                    tail += (w - 1.0).inv();
                }
                acc += c * tail;
            } else {
                let z = unit_phase(p);
                let lead = unit_phase(a * p);
                acc += c * lead * oscillating_tail(z, w, a, tol / c.norm().max(1.0));
            }
        }
        acc
    }

    fn evaluate_checked(
        &self,
        w: Complex64,
        drop_pole: bool,
        cfg: &PrecisionConfig,
    ) -> Result<(Complex64, f64), SpecFunError> {
        cfg.validate()?;
        let n = self.terms_for();
        let coarse = self.evaluate_at(w, n, drop_pole, cfg);
        let fine = self.evaluate_at(w, 2 * n, drop_pole, cfg);
        let bound = (fine - coarse).norm() + cfg.tail_tol();
        if !(bound <= 1e-8 * fine.norm().max(1.0)) {
            return Err(SpecFunError::NonConvergence {
                function: "DirichletSum",
                bound,
            });
        }
        Ok((fine, bound))
    }

    /// Σ_{n≥1} a_n n^{−w} with an error estimate.
    pub fn evaluate(&self, w: Complex64, cfg: &PrecisionConfig) -> Result<(Complex64, f64), SpecFunError> {
        if w == Complex64::new(1.0, 0.0) && self.pole_weight().norm() > 0.0 {
            return Err(SpecFunError::Pole {
                function: "DirichletSum",
                at: w,
            });
        }
        self.evaluate_checked(w, false, cfg)
    }

    /// Constant term at w = 1: the pole weight·1/(w−1) is removed.
    pub fn finite_part_at_one(&self, cfg: &PrecisionConfig) -> Result<(Complex64, f64), SpecFunError> {
        self.evaluate_checked(Complex64::new(1.0, 0.0), true, cfg)
    }
}

/// Σ_{n≥1} e^{2πi n φ} n^{−w}, continued analytically in w.
pub fn unit_polylog(phase: f64, w: Complex64, cfg: &PrecisionConfig) -> Result<Complex64, SpecFunError> {
    let mut d = DirichletSum::new();
    d.add(phase, Complex64::new(1.0, 0.0));
    Ok(d.evaluate(w, cfg)?.0)
}

/// Constant term of Σ_{n≥1} e^{2πi n φ} n^{−w} at w = 1 (γ for φ ≡ 0).
pub fn unit_polylog_finite_part(phase: f64, cfg: &PrecisionConfig) -> Result<Complex64, SpecFunError> {
    let mut d = DirichletSum::new();
    d.add(phase, Complex64::new(1.0, 0.0));
    Ok(d.finite_part_at_one(cfg)?.0)
}
