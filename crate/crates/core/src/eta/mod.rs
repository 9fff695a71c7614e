//! Eta side: Lefschetz factors ν, θ-regularized Chern characters, the eta
//! trace ϑ_S in spectral and dynamical form, the eta function η(s), its
//! residues and the eta invariant η(0).
//!
//! Spectral points are passed in the normalized form λ̂ ∈ x + ℤ; the physical
//! point is λ = aλ̂ with a = 2π/ℓ(f). The pairing κ_m = ⟨c^m ∧ 𝓛(N), [N_smooth]⟩
//! is input data, and rescaling ℓ(f) ↦ cℓ(f) must go with κ_m ↦ c^m κ_m.

mod series;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{same_angle, Dataset, ModelError};
use crate::specfun::{
    bernoulli_gen_ratio, bernoulli_polynomial, gamma_complex, gaussian_cutoff, hurwitz_zeta,
    lerch_at_root_of_unity, unit_phase, DirichletSum, PrecisionConfig,
};
use crate::Estimate;

pub use series::NilpotentSeries;
use series::factorial;

const MAX_ORBIT_TERMS: i64 = 10_000_000;
const REAL_TOL: f64 = 1e-8;
/// Distance to the nearest integer accepted by [`Eta::index_sig`].
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaMethod {
    Geo,
    Dyn,
    Top,
    ZetaAtZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaResult {
    pub value: f64,
    pub method: EtaMethod,
    pub truncation_error_bound: f64,
    /// |Im| of the assembled complex sum before it was declared real.
    pub imaginary_residue: f64,
}

/// Residue of η(s) at s = p, and of φ(s) = Γ(s + ½)η(s) in two normalizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaResidue {
    pub p: u32,
    /// −κ_{2p−1}·dim V/(2p−1)!·ℓ(f)/2π, from the Hurwitz blocks.
    pub eta: f64,
    /// Γ(p + ½) times `eta`.
    pub phi: f64,
    /// dim V·iℓ(f)κ_{2p−1}/(√π (p−1)! 4^p), the closed form with its factor i.
    pub phi_stated: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChSite {
    Smooth,
    Exceptional { j: usize, r: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChMode {
    /// Sum over the iT-spectrum.
    Spectral,
    /// Poisson-dual sum over closed orbits.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChValue {
    Series(NilpotentSeries),
    Scalar(Complex64),
}

/// Eta-side evaluator. Needs k, every κ_m with m odd ≤ 2k − 1, and 2k − 1
/// rotation numbers per exceptional orbit.
#[derive(Debug, Clone)]
pub struct Eta<'a> {
    data: &'a Dataset,
    cfg: PrecisionConfig,
    k: u32,
    kappa: Vec<f64>,
    nu: Vec<Vec<Complex64>>,
}

fn check_t(function: &'static str, t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(function, format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn check_real(function: &'static str, z: Complex64) -> Result<()> {
    let tolerance = REAL_TOL * z.re.abs().max(1.0);
    if z.im.abs() > tolerance {
        return Err(Error::NotReal {
            function,
            residual: z.im.abs(),
            tolerance,
        });
    }
    Ok(())
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Smallest N with Σ_{|n|>N} w(|n|·step+1)e^{−((|n|step)² − 2|n|step − 1)/4t} < tol.
fn orbit_cutoff(step: f64, t: f64, weight: f64, tol: f64) -> Result<i64> {
    if weight == 0.0 {
        return Ok(0);
    }
    let bound = |u: f64| weight * (u + 1.0) * (-(u * u - 2.0 * u - 1.0) / (4.0 * t)).exp();
    let peak = 2.0 + (2.0 * t).sqrt();
    for n in 1..MAX_ORBIT_TERMS {
        let u = n as f64 * step;
        if u < peak {
            continue;
        }
        let next = bound(u + step);
        if next == 0.0 {
            return Ok(n);
        }
        let q = next / bound(u);
        if q < 1.0 && 2.0 * next / (1.0 - q) < tol {
            return Ok(n);
        }
    }
    Err(Error::domain("orbit_cutoff", "orbit sum did not reach tolerance"))
}

/// ((−ρ−x) ceil ..= (ρ−x) floor), the n with |x + n| ≤ ρ.
fn lattice_range(x: f64, rho: f64) -> std::ops::RangeInclusive<i64> {
    ((-rho - x).ceil() as i64)..=((rho - x).floor() as i64)
}

impl<'a> Eta<'a> {
    pub fn new(data: &'a Dataset, cfg: PrecisionConfig) -> Result<Self> {
        let seifert = data.seifert();
        let k = seifert
            .k
            .ok_or_else(|| Error::EtaDataMissing("k is not set".into()))?;
        let mut kappa = vec![0.0; 2 * k as usize];
        for m in (1..2 * k).step_by(2) {
            kappa[m as usize] = *seifert
                .kappa
                .get(&m)
                .ok_or_else(|| Error::EtaDataMissing(format!("kappa[{m}] is not set")))?;
        }
        let mut nu = Vec::with_capacity(seifert.exceptional.len());
        for (j, orbit) in seifert.exceptional.iter().enumerate() {
            if orbit.rotation_numbers.len() != (2 * k - 1) as usize {
                return Err(Error::EtaDataMissing(format!(
                    "exceptional orbit {j} needs {} rotation numbers, has {}",
                    2 * k - 1,
                    orbit.rotation_numbers.len()
                )));
            }
            let alpha = i64::from(orbit.alpha);
            let mut row = vec![Complex64::new(0.0, 0.0); orbit.alpha as usize];
            for (r, slot) in row.iter_mut().enumerate().skip(1) {
                let prod: f64 = orbit
                    .rotation_numbers
                    .iter()
                    .map(|&beta| {
                        let q = (r as i64 * beta).rem_euclid(alpha);
                        1.0 / (PI * q as f64 / alpha as f64).tan()
                    })
                    .product();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                *slot = Complex64::new(0.0, sign * prod);
            }
            nu.push(row);
        }
        Ok(Self {
            data,
            cfg,
            k,
            kappa,
            nu,
        })
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn kappa_abs_sum(&self) -> f64 {
        self.kappa.iter().map(|v| v.abs()).sum()
    }

    fn nu_row(&self, j: usize) -> Result<&[Complex64]> {
        self.nu
            .get(j)
            .map(Vec::as_slice)
            .ok_or_else(|| ModelError::UnknownOrbit(j).into())
    }

    fn nu_max(&self, j: usize) -> f64 {
        self.nu[j].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ν at f_j^r, taken from the periodic table; zero at r ≡ 0.
    fn nu_periodic(&self, j: usize, r: i64) -> Complex64 {
        let row = &self.nu[j];
        row[r.rem_euclid(row.len() as i64) as usize]
    }

    /// Σ_{m odd} c_m κ_m.
    pub fn kappa_pair(&self, p: &NilpotentSeries) -> Result<Complex64> {
        if p.k() != self.k {
            return Err(Error::domain(
                "kappa_pair",
                format!("series has k = {}, data has k = {}", p.k(), self.k),
            ));
        }
        Ok((1..p.len()).step_by(2).map(|m| p.coeff(m) * self.kappa[m]).sum())
    }

    /// i(−1)^k Π_m cot(π r β_{j,m}/α_j).
    pub fn nu(&self, j: usize, r: i64) -> Result<Complex64> {
        let row = self.nu_row(j)?;
        let alpha = row.len() as i64;
        if r.rem_euclid(alpha) == 0 {
            return Err(Error::domain(
                "nu",
                format!("r = {r} is a multiple of alpha = {alpha}"),
            ));
        }
        Ok(row[r.rem_euclid(alpha) as usize])
    }

    fn parent_of(&self, lambda: f64) -> Result<(f64, u32)> {
        self.data
            .rep()
            .generic_angles()
            .into_iter()
            .find(|b| same_angle(b.x, lambda))
            .map(|b| (b.x, b.mult))
            .ok_or_else(|| ModelError::NotInSpectrum(lambda).into())
    }

    /// The orbifold index ⟨ch(V_λ) ∧ 𝓛(N)_orb, [N]⟩_orb before rounding.
    pub fn index_sig_complex(&self, lambda: f64) -> Result<Complex64> {
        let (x, mult) = self.parent_of(lambda)?;
        let lam = self.data.spectral_scale() * lambda;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in (1..2 * self.k as usize).step_by(2) {
            acc += real(f64::from(mult) * self.kappa[m] * lam.powi(m as i32) / factorial(m));
        }
        let rep = self.data.rep();
        for j in 0..self.data.exceptional_count() {
            let alpha = self.data.alpha(j);
            let af = f64::from(alpha);
            let mut part = Complex64::new(0.0, 0.0);
            for r in 1..i64::from(alpha) {
                let chi = rep.character_restricted(j, r, x)?;
                part += unit_phase(-(r as f64) * lambda / af) * chi * self.nu_periodic(j, r);
            }
            acc += part / af;
        }
        Ok(acc)
    }

    /// The index at λ̂ as an integer; fails when it is farther than 1e−6 from one.
    pub fn index_sig(&self, lambda: f64) -> Result<i64> {
        let z = self.index_sig_complex(lambda)?;
        let rounded = z.re.round();
        if (z.re - rounded).abs() > INTEGRALITY_TOL || z.im.abs() > INTEGRALITY_TOL {
            return Err(Error::NonIntegralIndex {
                lambda,
                value: z.re,
            });
        }
        Ok(rounded as i64)
    }

    /// −√t Σ_λ ind(λ) λ e^{−tλ²}, as a complex sum with its truncation bound.
    pub fn theta_s_top_complex(&self, t: f64) -> Result<(Complex64, f64)> {
        check_t("theta_S_top", t)?;
        let a = self.data.spectral_scale();
        let dim = f64::from(self.data.dim());
        let angles = self.data.rep().generic_angles();
        // |ind(λ)·λ| ≤ Σ_d coef_d |λ̂|^d
        let mut pieces: Vec<(u32, f64)> = (1..2 * self.k as usize)
            .step_by(2)
            .map(|m| ((m + 1) as u32, dim * self.kappa[m].abs() * a.powi(m as i32 + 1) / factorial(m)))
            .collect();
        let exc: f64 = (0..self.data.exceptional_count()).map(|j| dim * self.nu_max(j)).sum();
        pieces.push((1, exc * a));
        let pieces: Vec<(u32, f64)> = pieces.into_iter().filter(|(_, c)| *c > 0.0).collect();
        let tol = self.cfg.tail_tol() / (t.sqrt().max(1e-300) * (pieces.len() * angles.len()).max(1) as f64);
        let rho = pieces
            .iter()
            .map(|&(d, c)| gaussian_cutoff(t * a * a, d, tol / c))
            .fold(0.0, f64::max);
        let mut acc = Complex64::new(0.0, 0.0);
        for b in &angles {
            for n in lattice_range(b.x, rho) {
                let lambda = b.x + n as f64;
                let lam = a * lambda;
                acc += self.index_sig_complex(lambda)? * lam * (-t * lam * lam).exp();
            }
        }
        Ok((-t.sqrt() * acc, self.cfg.tail_tol()))
    }

    pub fn theta_s_top(&self, t: f64) -> Result<Estimate> {
        let (z, bound) = self.theta_s_top_complex(t)?;
        check_real("theta_S_top", z)?;
        Ok(Estimate::new(z.re, bound + z.im.abs()))
    }

    /// (ℓ + ic)e^{−(ℓ + ic)²/4t} in the truncated algebra.
    fn gaussian_orbit_series(&self, ell: f64, t: f64, with_linear_factor: bool) -> NilpotentSeries {
        let u = NilpotentSeries::linear(self.k, real(ell), i());
        let g = (&u * &u).scale(real(-1.0 / (4.0 * t))).exp();
        if with_linear_factor {
            &u * &g
        } else {
            g
        }
    }

    /// (1/√4π)[Σ_n χ(f^n)σ(f^n) + Σ_j Σ_{r≢0} χ(f_j^r)σ(f_j^r)] as a complex sum.
    pub fn theta_s_dyn_complex(&self, t: f64) -> Result<(Complex64, f64)> {
        check_t("theta_S_dyn", t)?;
        let rep = self.data.rep();
        let ell = self.data.fiber_length();
        let dim = f64::from(self.data.dim());
        let norm = 1.0 / (4.0 * PI).sqrt();
        let types = (1 + self.data.exceptional_count()) as f64;
        let tol = self.cfg.tail_tol() / types;

        let weight = norm * ell / (2.0 * t) * dim * self.kappa_abs_sum();
        let n_max = orbit_cutoff(ell, t, weight, tol)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in -n_max..=n_max {
            let chi = rep.character(crate::model::ClassKind::Generic { n })?;
            let pair = self.kappa_pair(&self.gaussian_orbit_series(n as f64 * ell, t, true))?;
            acc += chi * i() * ell / (2.0 * t) * pair;
        }

        for j in 0..self.data.exceptional_count() {
            let ell_j = self.data.seifert().exceptional_length(j);
            let alpha = i64::from(self.data.alpha(j));
            let w = norm * ell_j * ell_j / (2.0 * t) * dim * self.nu_max(j);
            if w == 0.0 {
                continue;
            }
            let p_max = gaussian_cutoff(ell_j * ell_j / (4.0 * t), 1, tol / w) as i64;
            for p in 1..=p_max {
                if p % alpha == 0 {
                    continue;
                }
                for signed in [p, -p] {
                    let chi = rep.character(crate::model::ClassKind::Exceptional { j, r: signed })?;
                    let len = signed as f64 * ell_j;
                    let sigma = i() * ell_j / (2.0 * t) * len * (-len * len / (4.0 * t)).exp()
                        * self.nu_periodic(j, signed);
                    acc += chi * sigma;
                }
            }
        }
        Ok((acc * norm, self.cfg.tail_tol()))
    }

    pub fn theta_s_dyn(&self, t: f64) -> Result<Estimate> {
        let (z, bound) = self.theta_s_dyn_complex(t)?;
        check_real("theta_S_dyn", z)?;
        Ok(Estimate::new(z.re, bound + z.im.abs()))
    }

    /// θ-regularized Chern character in one parity at one site.
    pub fn ch_theta(&self, parity: Parity, site: ChSite, t: f64, mode: ChMode) -> Result<ChValue> {
        check_t("ch_theta", t)?;
        match (site, mode) {
            (ChSite::Smooth, ChMode::Spectral) => Ok(ChValue::Series(self.ch_smooth_spectral(parity, t))),
            (ChSite::Smooth, ChMode::Dual) => Ok(ChValue::Series(self.ch_smooth_dual(parity, t)?)),
            (ChSite::Exceptional { j, r }, ChMode::Spectral) => {
                Ok(ChValue::Scalar(self.ch_exceptional_spectral(parity, j, r, t)?))
            }
            (ChSite::Exceptional { j, r }, ChMode::Dual) => {
                Ok(ChValue::Scalar(self.ch_exceptional_dual(parity, j, r, t)?))
            }
        }
    }

    fn ch_smooth_spectral(&self, parity: Parity, t: f64) -> NilpotentSeries {
        let a = self.data.spectral_scale();
        let len = 2 * self.k as usize;
        let angles = self.data.rep().generic_angles();
        let dim = f64::from(self.data.dim());
        let weight = dim * a.max(1.0).powi(len as i32) * t.sqrt().max(1.0) * angles.len() as f64;
        let rho = gaussian_cutoff(t * a * a, len as u32, self.cfg.tail_tol() / weight);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for b in &angles {
            for n in lattice_range(b.x, rho) {
                let lam = a * (b.x + n as f64);
                let mut w = f64::from(b.mult) * (-t * lam * lam).exp();
                if parity == Parity::Odd {
                    w *= t.sqrt() * lam;
                }
                let mut pow = 1.0;
                for (m, c) in coeffs.iter_mut().enumerate() {
                    *c += w * pow / factorial(m);
                    pow *= lam;
                }
            }
        }
        NilpotentSeries::from_coefficients(coeffs).unwrap_or_else(|_| NilpotentSeries::zero(self.k))
    }

    fn ch_smooth_dual(&self, parity: Parity, t: f64) -> Result<NilpotentSeries> {
        let ell = self.data.fiber_length();
        let dim = f64::from(self.data.dim());
        let prefactor = match parity {
            Parity::Even => real(ell / (4.0 * PI * t).sqrt()),
            Parity::Odd => -i() * ell / (4.0 * t * PI.sqrt()),
        };
        let n_max = orbit_cutoff(ell, t, dim * prefactor.norm(), self.cfg.tail_tol())?;
        let mut acc = NilpotentSeries::zero(self.k);
        for n in -n_max..=n_max {
            let chi = self.data.rep().character(crate::model::ClassKind::Generic { n })?;
            let term = self.gaussian_orbit_series(n as f64 * ell, t, parity == Parity::Odd);
            acc = &acc + &term.scale(chi);
        }
        Ok(acc.scale(prefactor))
    }

    fn ch_exceptional_spectral(&self, parity: Parity, j: usize, r: i64, t: f64) -> Result<Complex64> {
        if j >= self.data.exceptional_count() {
            return Err(ModelError::UnknownOrbit(j).into());
        }
        let a = self.data.spectral_scale();
        let af = f64::from(self.data.alpha(j));
        let dim = f64::from(self.data.dim());
        let weight = dim * a.max(1.0) * t.sqrt().max(1.0);
        let rho = gaussian_cutoff(t * a * a, 1, self.cfg.tail_tol() / weight);
        let rep = self.data.rep();
        let mut acc = Complex64::new(0.0, 0.0);
        for b in rep.generic_angles() {
            let chi = rep.character_restricted(j, r, b.x)?;
            for n in lattice_range(b.x, rho) {
                let lambda = b.x + n as f64;
                let lam = a * lambda;
                let mut w = (-t * lam * lam).exp();
                if parity == Parity::Odd {
                    w *= t.sqrt() * lam;
                }
                acc += chi * unit_phase(-(r as f64) * lambda / af) * w;
            }
        }
        Ok(acc)
    }

    fn ch_exceptional_dual(&self, parity: Parity, j: usize, r: i64, t: f64) -> Result<Complex64> {
        if j >= self.data.exceptional_count() {
            return Err(ModelError::UnknownOrbit(j).into());
        }
        let ell = self.data.fiber_length();
        let alpha = i64::from(self.data.alpha(j));
        let ell_j = self.data.seifert().exceptional_length(j);
        let dim = f64::from(self.data.dim());
        let prefactor = match parity {
            Parity::Even => real(ell / (4.0 * PI * t).sqrt()),
            Parity::Odd => -i() * ell / (4.0 * t * PI.sqrt()),
        };
        let degree = u32::from(parity == Parity::Odd);
        let scale = if parity == Parity::Odd { ell } else { 1.0 };
        let rho = gaussian_cutoff(ell * ell / (4.0 * t), degree, self.cfg.tail_tol() / (dim * prefactor.norm() * scale));
        let offset = r as f64 / alpha as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in lattice_range(offset, rho) {
            let p = r + n * alpha;
            let chi = self.data.rep().character(crate::model::ClassKind::Exceptional { j, r: p })?;
            let len = p as f64 * ell_j;
            let mut w = (-len * len / (4.0 * t)).exp();
            if parity == Parity::Odd {
                w *= len;
            }
            acc += chi * w;
        }
        Ok(acc * prefactor)
    }

    fn check_pole(&self, s: Complex64) -> Result<()> {
        let p = s.re.round();
        if s.im == 0.0 && (s.re - p).abs() < 1e-14 && p >= 1.0 && p <= f64::from(self.k) {
            return Err(Error::Pole {
                function: "eta_function",
                at: s,
            });
        }
        Ok(())
    }

    /// η(S_Q)(s) from the Hurwitz and Lerch blocks.
    pub fn eta_function(&self, s: Complex64) -> Result<Complex64> {
        self.check_pole(s)?;
        let cfg = &self.cfg;
        let ln_a = self.data.spectral_scale().ln();
        let rep = self.data.rep();
        let angles = rep.generic_angles();
        let two_s = 2.0 * s;

        let mut smooth = Complex64::new(0.0, 0.0);
        for m in (1..2 * self.k as usize).step_by(2) {
            if self.kappa[m] == 0.0 {
                continue;
            }
            let arg = two_s - m as f64;
            let mut block = Complex64::new(0.0, 0.0);
            for b in &angles {
                let z = if same_angle(b.x, 1.0) {
                    2.0 * hurwitz_zeta(arg, 1.0, cfg)?
                } else {
                    hurwitz_zeta(arg, b.x, cfg)? + hurwitz_zeta(arg, 1.0 - b.x, cfg)?
                };
                block += f64::from(b.mult) * z;
            }
            let scale = ((m as f64 - two_s) * ln_a).exp();
            smooth += self.kappa[m] / factorial(m) * scale * block;
        }

        let mut exceptional = Complex64::new(0.0, 0.0);
        for j in 0..self.data.exceptional_count() {
            let alpha = self.data.alpha(j);
            let af = f64::from(alpha);
            let mut part = Complex64::new(0.0, 0.0);
            for r in 1..i64::from(alpha) {
                let nu = self.nu_periodic(j, r);
                if nu == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rf = r as f64;
                let mut inner = Complex64::new(0.0, 0.0);
                for b in &angles {
                    let chi = rep.character_restricted(j, r, b.x)?;
                    if chi == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let z = if same_angle(b.x, 1.0) {
                        unit_phase(-rf / af) * lerch_at_root_of_unity(-r, alpha, two_s, 1.0, cfg)?
                            - unit_phase(rf / af) * lerch_at_root_of_unity(r, alpha, two_s, 1.0, cfg)?
                    } else {
                        unit_phase(-rf * b.x / af) * lerch_at_root_of_unity(-r, alpha, two_s, b.x, cfg)?
                            - unit_phase(rf * (1.0 - b.x) / af)
                                * lerch_at_root_of_unity(r, alpha, two_s, 1.0 - b.x, cfg)?
                    };
                    inner += chi * z;
                }
                part += inner * nu;
            }
            exceptional += part / af;
        }
        exceptional *= (-two_s * ln_a).exp();
        Ok(-(smooth + exceptional))
    }

    fn eta_result(function: &'static str, method: EtaMethod, z: Complex64, bound: f64) -> Result<EtaResult> {
        check_real(function, z)?;
        Ok(EtaResult {
            value: z.re,
            method,
            truncation_error_bound: bound,
            imaginary_residue: z.im.abs(),
        })
    }

    /// η(0) from Bernoulli polynomials and the generating ratio e^{tx}/(e^t − 1).
    pub fn eta0_geo(&self) -> Result<EtaResult> {
        let a = self.data.spectral_scale();
        let rep = self.data.rep();
        let angles = rep.generic_angles();
        let mut acc = Complex64::new(0.0, 0.0);
        for b in &angles {
            let mut smooth = 0.0;
            for n in 1..=self.k as usize {
                let m = 2 * n - 1;
                smooth += bernoulli_polynomial(2 * n, b.x)? * self.kappa[m] * a.powi(m as i32) / factorial(2 * n);
            }
            acc += 2.0 * f64::from(b.mult) * smooth;
        }
        for j in 0..self.data.exceptional_count() {
            let alpha = self.data.alpha(j);
            let af = f64::from(alpha);
            for b in &angles {
                // At x = 1 the spectrum has no point at 0, which removes ½ from the ratio.
                let shift = if same_angle(b.x, 1.0) { 0.5 } else { 0.0 };
                for r in 1..i64::from(alpha) {
                    let chi = rep.character_restricted(j, r, b.x)?;
                    let g = bernoulli_gen_ratio(Complex64::new(0.0, -2.0 * PI * r as f64 / af), b.x)? - shift;
                    acc += 2.0 / af * chi * g * self.nu_periodic(j, r);
                }
            }
        }
        let terms = (angles.len() * (1 + self.data.exceptional_count())) as f64;
        Self::eta_result("eta0_geo", EtaMethod::Geo, acc, 4.0 * f64::EPSILON * terms * acc.norm().max(1.0))
    }

    /// η(0) as the value of the Hurwitz–Lerch eta function at s = 0.
    pub fn eta0_zeta(&self) -> Result<EtaResult> {
        let z = self.eta_function(Complex64::new(0.0, 0.0))?;
        Self::eta_result("eta_function", EtaMethod::ZetaAtZero, z, self.cfg.target_abs_tol)
    }

    /// Σ_{n≥1} (χ(f^n) + χ(f^{−n})) n^{−w}.
    fn generic_dirichlet(&self) -> DirichletSum {
        let mut d = DirichletSum::new();
        for b in self.data.rep().generic_angles() {
            let c = real(f64::from(b.mult));
            d.add(b.x, c);
            d.add(-b.x, c);
        }
        d
    }

    /// Σ_{p≥1} (χ(f_j^p) + χ(f_j^{−p})) ν(f_j^p) p^{−w}, with ν split into
    /// characters of ℤ/α_j.
    fn exceptional_dirichlet(&self, j: usize) -> Result<DirichletSum> {
        let row = self.nu_row(j)?;
        let alpha = row.len();
        let af = alpha as f64;
        let nu_hat: Vec<Complex64> = (0..alpha)
            .map(|q| {
                row.iter()
                    .enumerate()
                    .map(|(r, v)| v * unit_phase(-((r * q) as f64) / af))
                    .sum::<Complex64>()
                    / af
            })
            .collect();
        let mut d = DirichletSum::new();
        for b in self.data.rep().exceptional_angles(j, None)? {
            let m = f64::from(b.mult);
            for (q, c) in nu_hat.iter().enumerate() {
                let shift = q as f64 / af;
                d.add(b.x + shift, c * m);
                d.add(-b.x + shift, c * m);
            }
        }
        Ok(d)
    }

    /// η(0) as a sum of orbit atoms: generic terms (iℓ/π)⟨1/(ℓ(f^n) + ic)⟩ and
    /// exceptional terms (iℓ(f_j)/πℓ(γ))ν(γ), each ±-pair summed together.
    pub fn eta0_dyn(&self) -> Result<EtaResult> {
        let cfg = &self.cfg;
        let ell = self.data.fiber_length();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        let generic = self.generic_dirichlet();
        for m in (1..2 * self.k as usize).step_by(2) {
            if self.kappa[m] == 0.0 {
                continue;
            }
            let coeff = i() * ell / PI * (-i()).powu(m as u32) * self.kappa[m] / ell.powi(m as i32 + 1);
            let (v, b) = generic.evaluate(real((m + 1) as f64), cfg)?;
            acc += coeff * v;
            bound += coeff.norm() * b;
        }
        for j in 0..self.data.exceptional_count() {
            let d = self.exceptional_dirichlet(j)?;
            let pole = d.pole_weight();
            if pole.norm() > 1e-9 {
                return Err(Error::domain(
                    "eta0_dyn",
                    format!("exceptional atoms of orbit {j} do not cancel at order 1/p: weight {pole}"),
                ));
            }
            let (v, b) = d.finite_part_at_one(cfg)?;
            acc += i() / PI * v;
            bound += b / PI;
        }
        Self::eta_result("eta0_dyn", EtaMethod::Dyn, acc, bound)
    }

    /// η(s) from the orbit sum Γ(1−s)/(4^s√π Γ(s+½)) Σ_γ χ(γ)η(γ)(s), for Re s ≤ −0.1.
    pub fn eta_function_dyn(&self, s: Complex64) -> Result<(Complex64, f64)> {
        if s.re > -0.1 {
            return Err(Error::domain(
                "eta_function_dyn",
                format!("requires Re s ≤ −0.1, got s = {s}"),
            ));
        }
        let cfg = &self.cfg;
        let ell = self.data.fiber_length();
        let ln_ell = ell.ln();
        let two_s = 2.0 * s;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        let generic = self.generic_dirichlet();
        for m in (1..2 * self.k as usize).step_by(2) {
            if self.kappa[m] == 0.0 {
                continue;
            }
            // binom(2s − 1, m)
            let mut binom = Complex64::new(1.0, 0.0);
            for q in 0..m {
                binom *= two_s - 1.0 - q as f64;
            }
            binom /= factorial(m);
            let coeff = i() * ell * self.kappa[m] * binom * i().powu(m as u32)
                * ((two_s - 1.0 - m as f64) * ln_ell).exp();
            let (v, b) = generic.evaluate(m as f64 + 1.0 - two_s, cfg)?;
            acc += coeff * v;
            bound += coeff.norm() * b;
        }
        for j in 0..self.data.exceptional_count() {
            let ell_j = self.data.seifert().exceptional_length(j);
            let coeff = i() * (two_s * ell_j.ln()).exp();
            let (v, b) = self.exceptional_dirichlet(j)?.evaluate(1.0 - two_s, cfg)?;
            acc += coeff * v;
            bound += coeff.norm() * b;
        }
        let one = Complex64::new(1.0, 0.0);
        let four_s = (s * 4.0f64.ln()).exp();
        // 1/Γ(s + ½) vanishes at the poles of Γ.
        let recip = match gamma_complex(s + 0.5) {
            Ok(g) => g.inv(),
            Err(crate::specfun::SpecFunError::Pole { .. }) => Complex64::new(0.0, 0.0),
            Err(e) => return Err(e.into()),
        };
        let factor = gamma_complex(one - s)? * recip / (four_s * PI.sqrt());
        Ok((factor * acc, factor.norm() * bound))
    }

    /// Residue of η at s = p ∈ {1, …, k}.
    pub fn eta_residue(&self, p: u32) -> Result<EtaResidue> {
        if p < 1 || p > self.k {
            return Err(Error::domain(
                "eta_residue",
                format!("p = {p} outside 1..={}", self.k),
            ));
        }
        let m = (2 * p - 1) as usize;
        let dim = f64::from(self.data.dim());
        let ell = self.data.fiber_length();
        let eta = -self.kappa[m] * dim / factorial(m) * ell / (2.0 * PI);
        let gamma = gamma_complex(real(f64::from(p) + 0.5))?.re;
        let phi_stated = i() * dim * ell * self.kappa[m]
            / (PI.sqrt() * factorial(p as usize - 1) * 4.0f64.powi(p as i32));
        Ok(EtaResidue {
            p,
            eta,
            phi: gamma * eta,
            phi_stated,
        })
    }
}
