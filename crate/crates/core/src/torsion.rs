//! Torsion side: heat traces ϑ in three forms, the zeta functions Z and
//! Z^dyn, the contact analytic torsion and the Fuller measure.
//!
//! With ℓ = ℓ(f) and a = 2π/ℓ, the iT-spectrum is a·(x + ℤ) over the
//! eigenangles x of ρ(f). Spectral points are passed around in the
//! normalized form λ̂ = λ/a ∈ x + ℤ.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{same_angle, Block, Dataset, ModelError};
use crate::specfun::{
    gaussian_cutoff, hurwitz_zeta, hurwitz_zeta_s_derivative_at_zero, jacobi_theta, DirichletSum,
    PrecisionConfig, EULER_GAMMA,
};
use crate::Estimate;

/// A primitive closed orbit: the generic fiber f or an exceptional fiber f_j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimitiveOrbit {
    Generic,
    Exceptional(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionMethod {
    Geo,
    Dyn,
    Top,
    ClosedForm,
    ZetaDerivative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorsionResult {
    pub value: f64,
    pub method: TorsionMethod,
    pub truncation_error_bound: f64,
}

/// lim_{s→0} (Z^dyn(s) + χ'/s) and its relation to Z'(0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullerMeasure {
    /// raw_limit − 2γχ', which equals Z'(0).
    pub value: f64,
    /// The regularized orbit sum lim_{s→0} (Z^dyn(s) + χ'/s).
    pub raw_limit: f64,
    /// 2γχ', the constant separating the two.
    pub euler_gamma_shift: f64,
    /// Coefficient c of the −c/s pole of Z^dyn at 0; equals χ'.
    pub pole_coefficient: f64,
    pub error_bound: f64,
}

fn is_unit(x: f64) -> bool {
    same_angle(x, 1.0)
}

#[derive(Debug, Clone, Copy)]
struct ZetaSite {
    weight: f64,
    order: f64,
}

/// Torsion-side evaluator over validated data.
#[derive(Debug, Clone, Copy)]
pub struct Torsion<'a> {
    data: &'a Dataset,
    cfg: PrecisionConfig,
}

impl<'a> Torsion<'a> {
    pub fn new(data: &'a Dataset, cfg: PrecisionConfig) -> Self {
        Self { data, cfg }
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    fn check_t(function: &'static str, t: f64) -> Result<()> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain(function, format!("t must be positive, got {t}")));
        }
        Ok(())
    }

    fn angles(&self, site: PrimitiveOrbit) -> Result<Vec<Block>> {
        match site {
            PrimitiveOrbit::Generic => Ok(self.data.rep().generic_angles()),
            PrimitiveOrbit::Exceptional(j) => Ok(self.data.rep().exceptional_angles(j, None)?),
        }
    }

    fn site_length(&self, site: PrimitiveOrbit) -> Result<f64> {
        match site {
            PrimitiveOrbit::Generic => Ok(self.data.fiber_length()),
            PrimitiveOrbit::Exceptional(j) if j < self.data.exceptional_count() => {
                Ok(self.data.seifert().exceptional_length(j))
            }
            PrimitiveOrbit::Exceptional(j) => Err(ModelError::UnknownOrbit(j).into()),
        }
    }

    fn sites(&self) -> Vec<(f64, PrimitiveOrbit)> {
        let mut out = vec![(self.data.chi_n_star() as f64, PrimitiveOrbit::Generic)];
        out.extend((0..self.data.exceptional_count()).map(|j| (1.0, PrimitiveOrbit::Exceptional(j))));
        out
    }

    /// Σ_x dim V^x_γ · θ(x, 4π²t/ℓ(γ)²).
    pub fn chi_theta(&self, site: PrimitiveOrbit, t: f64) -> Result<f64> {
        Self::check_t("chi_theta", t)?;
        let ell = self.site_length(site)?;
        let scaled = 4.0 * PI * PI * t / (ell * ell);
        let mut acc = 0.0;
        for b in self.angles(site)? {
            acc += f64::from(b.mult) * jacobi_theta(b.x, scaled, &self.cfg)?;
        }
        Ok(acc)
    }

    /// χ(N*)·chi_theta(f) + Σ_j chi_theta(f_j).
    pub fn theta_geo(&self, t: f64) -> Result<Estimate> {
        let mut acc = 0.0;
        let mut weight = 0.0;
        for (w, site) in self.sites() {
            acc += w * self.chi_theta(site, t)?;
            weight += w.abs() * f64::from(self.data.dim());
        }
        Ok(Estimate::new(acc, weight * self.cfg.tail_tol()))
    }

    /// (1/√(4πt)) Σ_γ χ_ρ(γ) e(γ) e^{−ℓ(γ)²/4t}, including the constant class.
    pub fn theta_dyn(&self, t: f64) -> Result<Estimate> {
        Self::check_t("theta_dyn", t)?;
        let dim = f64::from(self.data.dim());
        let ell = self.data.fiber_length();
        let chi_n = self.data.euler();
        let norm = (4.0 * PI * t).sqrt();
        let types = 1 + self.data.exceptional_count();
        let tol = self.cfg.tail_tol() * norm / types as f64;
        let mut cutoff: f64 = 0.0;
        let generic_weight = ell * chi_n.abs() * dim;
        if generic_weight > 0.0 {
            cutoff = cutoff.max(ell * gaussian_cutoff(ell * ell / (4.0 * t), 0, tol / generic_weight));
        }
        for j in 0..self.data.exceptional_count() {
            let ell_j = self.data.seifert().exceptional_length(j);
            cutoff = cutoff.max(ell_j * gaussian_cutoff(ell_j * ell_j / (4.0 * t), 0, tol / (ell_j * dim)));
        }
        let mut acc = Complex64::new(chi_n * ell * dim, 0.0);
        for class in self.data.enumerate_orbits(cutoff) {
            acc += class.character * class.e_weight * (-class.length * class.length / (4.0 * t)).exp();
        }
        let acc = acc / norm;
        check_real("theta_dyn", acc)?;
        Ok(Estimate::new(acc.re, self.cfg.tail_tol() + acc.im.abs()))
    }

    /// dim(V^x)·χ(N*) + Σ_j #{eigenvalues e^{2πi x_jk} of ρ(f_j) with λ̂/α_j ≡ x_jk}.
    pub fn index_dh(&self, lambda: f64) -> Result<i64> {
        let rep = self.data.rep();
        let parent = rep
            .generic_angles()
            .into_iter()
            .find(|b| same_angle(b.x, lambda))
            .ok_or(ModelError::NotInSpectrum(lambda))?;
        let mut index = i64::from(parent.mult) * self.data.chi_n_star();
        for (j, blocks) in rep.exceptional_blocks.iter().enumerate() {
            let alpha = f64::from(self.data.alpha(j));
            index += blocks
                .iter()
                .filter(|b| same_angle(lambda / alpha, b.x))
                .map(|b| i64::from(b.mult))
                .sum::<i64>();
        }
        Ok(index)
    }

    /// Σ_λ ind(λ) e^{−tλ²} over the iT-spectrum.
    pub fn theta_top(&self, t: f64) -> Result<Estimate> {
        Self::check_t("theta_top", t)?;
        let a = self.data.spectral_scale();
        let dim = f64::from(self.data.dim());
        let bound = dim * (self.data.chi_n_star().unsigned_abs() as f64 + self.data.exceptional_count() as f64);
        let rho = if bound > 0.0 {
            gaussian_cutoff(t * a * a, 0, self.cfg.tail_tol() / bound)
        } else {
            0.0
        };
        let mut acc = 0.0;
        for b in self.data.rep().generic_angles() {
            let lo = (-rho - b.x).ceil() as i64;
            let hi = (rho - b.x).floor() as i64;
            for n in lo..=hi {
                let lambda = b.x + n as f64;
                let idx = self.index_dh(lambda)?;
                if idx != 0 {
                    acc += idx as f64 * (-t * a * a * lambda * lambda).exp();
                }
            }
        }
        Ok(Estimate::new(acc, self.cfg.tail_tol()))
    }

    /// Evaluates one of the three heat-trace forms.
    pub fn heat_trace(&self, method: TorsionMethod, t: f64) -> Result<Estimate> {
        match method {
            TorsionMethod::Geo => self.theta_geo(t),
            TorsionMethod::Dyn => self.theta_dyn(t),
            TorsionMethod::Top => self.theta_top(t),
            other => Err(Error::domain(
                "heat_trace",
                format!("{other:?} is not a heat-trace method"),
            )),
        }
    }

    fn zeta_sites(&self) -> Result<Vec<(ZetaSite, Vec<Block>)>> {
        self.sites()
            .into_iter()
            .map(|(weight, site)| {
                let order = 2.0 * PI / self.site_length(site)?;
                Ok((ZetaSite { weight, order }, self.angles(site)?))
            })
            .collect()
    }

    /// Σ_x mult·(ζ(u,x) + ζ(u,1−x)) with x = 1 blocks contributing 2ζ(u).
    fn block_zeta(&self, u: Complex64, blocks: &[Block]) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in blocks {
            let m = f64::from(b.mult);
            if is_unit(b.x) {
                acc += 2.0 * m * hurwitz_zeta(u, 1.0, &self.cfg)?;
            } else {
                acc += m * (hurwitz_zeta(u, b.x, &self.cfg)? + hurwitz_zeta(u, 1.0 - b.x, &self.cfg)?);
            }
        }
        Ok(acc)
    }

    /// Z(s) = Σ_sites weight · order^{−2s} · F(2s).
    pub fn zeta(&self, s: Complex64) -> Result<Complex64> {
        if s == Complex64::new(0.5, 0.0) {
            return Err(Error::Pole { function: "zeta_Z", at: s });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (site, blocks) in self.zeta_sites()? {
            if site.weight == 0.0 {
                continue;
            }
            let pref = (-2.0 * s * site.order.ln()).exp();
            acc += site.weight * pref * self.block_zeta(2.0 * s, &blocks)?;
        }
        Ok(acc)
    }

    /// Res_{s=1/2} Z = χ(N)·dim V·ℓ(f)/2π.
    pub fn zeta_residue_half(&self) -> f64 {
        self.data.euler() * f64::from(self.data.dim()) / self.data.spectral_scale()
    }

    /// Z'(0) from the s-derivative of the Hurwitz blocks.
    pub fn zeta_derivative_at_zero(&self) -> Result<f64> {
        let mut acc = 0.0;
        for (site, blocks) in self.zeta_sites()? {
            let mut f0 = 0.0;
            let mut f1 = 0.0;
            for b in &blocks {
                let m = f64::from(b.mult);
                if is_unit(b.x) {
                    f0 -= m;
                    f1 += 2.0 * m * hurwitz_zeta_s_derivative_at_zero(1.0)?;
                } else {
                    f1 += m * (hurwitz_zeta_s_derivative_at_zero(b.x)?
                        + hurwitz_zeta_s_derivative_at_zero(1.0 - b.x)?);
                }
            }
            acc += site.weight * (-2.0 * site.order.ln() * f0 + 2.0 * f1);
        }
        Ok(acc)
    }

    /// ln T_Q = χ' ln ℓ(f) + Σ_sites weight Σ_{x≠1} mult ln(2 sin πx) − Σ_j dim V¹_{f_j} ln α_j.
    pub fn log_torsion_closed_form(&self) -> Result<f64> {
        let mut acc = self.data.chi_prime() as f64 * self.data.fiber_length().ln();
        for (weight, site) in self.sites() {
            for b in self.angles(site)? {
                if is_unit(b.x) {
                    if let PrimitiveOrbit::Exceptional(j) = site {
                        acc -= f64::from(b.mult) * f64::from(self.data.alpha(j)).ln();
                    }
                } else {
                    acc += weight * f64::from(b.mult) * (2.0 * (PI * b.x).sin()).ln();
                }
            }
        }
        Ok(acc)
    }

    /// T_Q by the determinant product formula.
    pub fn torsion_closed_form(&self) -> Result<TorsionResult> {
        Ok(TorsionResult {
            value: self.log_torsion_closed_form()?.exp(),
            method: TorsionMethod::ClosedForm,
            truncation_error_bound: 0.0,
        })
    }

    /// T_Q = exp(−½ Z'(0)) with Z'(0) from Hurwitz derivatives.
    pub fn torsion_from_zeta(&self) -> Result<TorsionResult> {
        Ok(TorsionResult {
            value: (-0.5 * self.zeta_derivative_at_zero()?).exp(),
            method: TorsionMethod::ZetaDerivative,
            truncation_error_bound: 0.0,
        })
    }

    /// Z'(0) by a central difference of step h.
    pub fn zeta_derivative_finite_difference(&self, h: f64) -> Result<f64> {
        let plus = self.zeta(Complex64::new(h, 0.0))?;
        let minus = self.zeta(Complex64::new(-h, 0.0))?;
        Ok((plus - minus).re / (2.0 * h))
    }

    /// Per orbit type: (L, Σ_{n≥1} a_n n^{−w}) with Z^dyn(s) = Σ L^{2s−1} D(1−2s).
    fn dynamical_series(&self) -> Result<Vec<(f64, DirichletSum)>> {
        let rep = self.data.rep();
        let ell = self.data.fiber_length();
        let mut out = Vec::new();
        let mut generic = DirichletSum::new();
        let coeff = ell * self.data.euler();
        for b in rep.generic_angles() {
            let c = Complex64::new(coeff * f64::from(b.mult), 0.0);
            generic.add(b.x, c);
            generic.add(-b.x, c);
        }
        out.push((ell, generic));
        for j in 0..self.data.exceptional_count() {
            let alpha = self.data.alpha(j);
            let af = f64::from(alpha);
            let ell_j = self.data.seifert().exceptional_length(j);
            let mut d = DirichletSum::new();
            // [n ≢ 0 mod α] = 1 − (1/α) Σ_q e^{2πinq/α}
            for b in rep.exceptional_angles(j, None)? {
                let c = ell_j * f64::from(b.mult);
                for sign in [1.0, -1.0] {
                    d.add(sign * b.x, Complex64::new(c, 0.0));
                    for q in 0..alpha {
                        d.add(sign * b.x + f64::from(q) / af, Complex64::new(-c / af, 0.0));
                    }
                }
            }
            out.push((ell_j, d));
        }
        Ok(out)
    }

    /// Σ_{γ≠0} χ_ρ(γ) e(γ) |ℓ(γ)|^{2s−1}, for Re s ≤ −0.1.
    pub fn zeta_dyn(&self, s: Complex64) -> Result<(Complex64, f64)> {
        if s.re > -0.1 {
            return Err(Error::domain(
                "zeta_Zdyn",
                format!("requires Re s ≤ −0.1, got s = {s}"),
            ));
        }
        let w = 1.0 - 2.0 * s;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        for (len, series) in self.dynamical_series()? {
            let scale = ((2.0 * s - 1.0) * len.ln()).exp();
            let (v, b) = series.evaluate(w, &self.cfg)?;
            acc += scale * v;
            bound += scale.norm() * b;
        }
        Ok((acc, bound))
    }

    /// The regularized orbit sum at s = 0 and its Euler-γ offset from Z'(0).
    pub fn fuller_measure(&self) -> Result<FullerMeasure> {
        let mut raw = Complex64::new(0.0, 0.0);
        let mut pole = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        for (len, series) in self.dynamical_series()? {
            let p = series.pole_weight();
            let (c, b) = series.finite_part_at_one(&self.cfg)?;
            raw += (c - p * len.ln()) / len;
            pole += p / (2.0 * len);
            bound += b / len;
        }
        check_real("fuller_measure", raw)?;
        let shift = 2.0 * EULER_GAMMA * self.data.chi_prime() as f64;
        Ok(FullerMeasure {
            value: raw.re - shift,
            raw_limit: raw.re,
            euler_gamma_shift: shift,
            pole_coefficient: pole.re,
            error_bound: bound + raw.im.abs(),
        })
    }
}

fn check_real(function: &'static str, z: Complex64) -> Result<()> {
    let tolerance = 1e-8 * z.re.abs().max(1.0);
    if z.im.abs() > tolerance {
        return Err(Error::NotReal {
            function,
            residual: z.im.abs(),
            tolerance,
        });
    }
    Ok(())
}
