//! Seifert and holonomy data, validation, characters and closed-orbit classes.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::unit_phase;

/// Tolerance for identifying eigenangles and spectral points mod 1.
pub const ANGLE_TOL: f64 = 1e-9;
/// Tolerance for the holonomy compatibility α_j·x_jk ≡ parent_x.
pub const COMPAT_TOL: f64 = 1e-12;

fn default_fiber_length() -> f64 {
    2.0 * PI
}

/// Distance between a and b on ℝ/ℤ.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = a - b;
    (d - d.round()).abs()
}

pub fn same_angle(a: f64, b: f64) -> bool {
    angle_distance(a, b) < ANGLE_TOL
}

fn is_unit_angle(x: f64) -> bool {
    same_angle(x, 1.0)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalOrbit {
    pub alpha: u32,
    #[serde(default)]
    pub rotation_numbers: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeifertData {
    pub chi_n_star: i64,
    #[serde(default = "default_fiber_length")]
    pub fiber_length: f64,
    #[serde(default)]
    pub exceptional: Vec<ExceptionalOrbit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub kappa: BTreeMap<u32, f64>,
}

impl SeifertData {
    /// Exact χ(N) = χ(N*) + Σ_j 1/α_j.
    pub fn rational_euler(&self) -> Rational64 {
        self.exceptional
            .iter()
            .fold(Rational64::from_integer(self.chi_n_star), |acc, e| {
                acc + Rational64::new(1, i64::from(e.alpha.max(1)))
            })
    }

    pub fn euler(&self) -> f64 {
        self.rational_euler().to_f64().unwrap_or(f64::NAN)
    }

    /// ℓ(f_j) = ℓ(f)/α_j.
    pub fn exceptional_length(&self, j: usize) -> f64 {
        self.fiber_length / f64::from(self.exceptional[j].alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub x: f64,
    pub mult: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalBlock {
    pub x: f64,
    pub mult: u32,
    pub parent_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationData {
    pub generic_blocks: Vec<Block>,
    #[serde(default)]
    pub exceptional_blocks: Vec<Vec<ExceptionalBlock>>,
}

/// A free homotopy class of closed orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassKind {
    Generic { n: i64 },
    Exceptional { j: usize, r: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub kind: ClassKind,
    pub length: f64,
    pub character: Complex64,
    pub e_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    FiberLength,
    AlphaRange,
    KRange,
    KappaKey,
    KappaValue,
    RotationCount,
    RotationRange,
    NotCoprime,
    AngleRange,
    MultZero,
    EmptyRepresentation,
    BlockCount,
    ParentUnknown,
    RepCompat,
    DimMismatch,
}

impl ViolationCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::FiberLength => "FIBER_LENGTH",
            Self::AlphaRange => "ALPHA_RANGE",
            Self::KRange => "K_RANGE",
            Self::KappaKey => "KAPPA_KEY",
            Self::KappaValue => "KAPPA_VALUE",
            Self::RotationCount => "ROTATION_COUNT",
            Self::RotationRange => "ROTATION_RANGE",
            Self::NotCoprime => "NOT_COPRIME",
            Self::AngleRange => "ANGLE_RANGE",
            Self::MultZero => "MULT_ZERO",
            Self::EmptyRepresentation => "EMPTY_REPRESENTATION",
            Self::BlockCount => "BLOCK_COUNT",
            Self::ParentUnknown => "PARENT_UNKNOWN",
            Self::RepCompat => "REP_COMPAT",
            Self::DimMismatch => "DIM_MISMATCH",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    fn push(&mut self, code: ViolationCode, message: impl Into<String>) {
        self.violations.push(Violation {
            code,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.code, v.message))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid data: {0}")]
    Invalid(ValidationReport),
    #[error("unknown exceptional orbit index {0}")]
    UnknownOrbit(usize),
    #[error("exponent {r} is divisible by the orbit order {alpha}")]
    TrivialExponent { r: i64, alpha: u32 },
    #[error("{0} is not in the spectrum")]
    NotInSpectrum(f64),
}

fn check_angle(report: &mut ValidationReport, what: &str, x: f64) {
    if !(x > 0.0 && x <= 1.0) {
        report.push(ViolationCode::AngleRange, format!("{what} = {x} is outside (0, 1]"));
    }
}

/// Checks every standing hypothesis on the data; never fails, only reports.
pub fn validate(seifert: &SeifertData, rep: &RepresentationData) -> ValidationReport {
    let mut report = ValidationReport::default();
    if !(seifert.fiber_length > 0.0 && seifert.fiber_length.is_finite()) {
        report.push(
            ViolationCode::FiberLength,
            format!("fiber_length must be positive, got {}", seifert.fiber_length),
        );
    }
    if seifert.k == Some(0) {
        report.push(ViolationCode::KRange, "k must be at least 1");
    }
    for (&m, &v) in &seifert.kappa {
        if m % 2 == 0 || seifert.k.is_some_and(|k| m > 2 * k - 1) {
            report.push(ViolationCode::KappaKey, format!("kappa key {m} must be odd and at most 2k-1"));
        }
        if !v.is_finite() {
            report.push(ViolationCode::KappaValue, format!("kappa[{m}] = {v} is not finite"));
        }
    }
    for (j, orbit) in seifert.exceptional.iter().enumerate() {
        if orbit.alpha < 2 {
            report.push(
                ViolationCode::AlphaRange,
                format!("exceptional orbit {j} has alpha = {} < 2", orbit.alpha),
            );
            continue;
        }
        let alpha = i64::from(orbit.alpha);
        if let Some(k) = seifert.k.filter(|&k| k > 0) {
            if !orbit.rotation_numbers.is_empty() && orbit.rotation_numbers.len() != (2 * k - 1) as usize {
                report.push(
                    ViolationCode::RotationCount,
                    format!(
                        "exceptional orbit {j} has {} rotation numbers, expected {}",
                        orbit.rotation_numbers.len(),
                        2 * k - 1
                    ),
                );
            }
        }
        for &beta in &orbit.rotation_numbers {
            if !(1..alpha).contains(&beta) {
                report.push(
                    ViolationCode::RotationRange,
                    format!("exceptional orbit {j}: rotation number {beta} outside [1, {}]", alpha - 1),
                );
            } else if gcd(beta, alpha) != 1 {
                report.push(
                    ViolationCode::NotCoprime,
                    format!("exceptional orbit {j}: gcd({beta}, {alpha}) = {}", gcd(beta, alpha)),
                );
            }
        }
    }

    if rep.generic_blocks.is_empty() {
        report.push(ViolationCode::EmptyRepresentation, "no generic blocks");
    }
    for b in &rep.generic_blocks {
        check_angle(&mut report, "generic x", b.x);
        if b.mult == 0 {
            report.push(ViolationCode::MultZero, format!("generic block x = {} has multiplicity 0", b.x));
        }
    }
    let dim: u64 = rep.generic_blocks.iter().map(|b| u64::from(b.mult)).sum();
    if rep.exceptional_blocks.len() != seifert.exceptional.len() {
        report.push(
            ViolationCode::BlockCount,
            format!(
                "{} exceptional orbits but {} exceptional block lists",
                seifert.exceptional.len(),
                rep.exceptional_blocks.len()
            ),
        );
    }
    let parents = aggregate(rep.generic_blocks.iter().map(|b| (b.x, b.mult)));
    for (j, blocks) in rep.exceptional_blocks.iter().enumerate() {
        let alpha = seifert.exceptional.get(j).map(|e| e.alpha);
        let mut per_parent: Vec<(f64, u64)> = parents.iter().map(|&(x, _)| (x, 0)).collect();
        for b in blocks {
            check_angle(&mut report, "exceptional x", b.x);
            check_angle(&mut report, "parent_x", b.parent_x);
            if b.mult == 0 {
                report.push(
                    ViolationCode::MultZero,
                    format!("exceptional orbit {j}: block x = {} has multiplicity 0", b.x),
                );
            }
            match per_parent.iter_mut().find(|(x, _)| same_angle(*x, b.parent_x)) {
                Some(slot) => slot.1 += u64::from(b.mult),
                None => report.push(
                    ViolationCode::ParentUnknown,
                    format!("exceptional orbit {j}: parent_x = {} matches no generic block", b.parent_x),
                ),
            }
            if let Some(alpha) = alpha.filter(|&a| a >= 2) {
                if angle_distance(f64::from(alpha) * b.x, b.parent_x) > COMPAT_TOL * f64::from(alpha) {
                    report.push(
                        ViolationCode::RepCompat,
                        format!(
                            "exceptional orbit {j}: {alpha}·{} is not {} mod 1",
                            b.x, b.parent_x
                        ),
                    );
                }
            }
        }
        for ((x, got), &(_, want)) in per_parent.iter().zip(parents.iter()) {
            if *got != u64::from(want) {
                report.push(
                    ViolationCode::DimMismatch,
                    format!("exceptional orbit {j}: parent x = {x} refined into {got} dimensions, expected {want}"),
                );
            }
        }
        let total: u64 = blocks.iter().map(|b| u64::from(b.mult)).sum();
        if total != dim && !report.has(ViolationCode::DimMismatch) {
            report.push(
                ViolationCode::DimMismatch,
                format!("exceptional orbit {j}: multiplicities sum to {total}, dim V = {dim}"),
            );
        }
    }
    report
}

/// Merges entries whose angles agree mod 1, keeping first-seen order.
fn aggregate(items: impl Iterator<Item = (f64, u32)>) -> Vec<(f64, u32)> {
    let mut out: Vec<(f64, u32)> = Vec::new();
    for (x, m) in items {
        match out.iter_mut().find(|(y, _)| same_angle(*y, x)) {
            Some(slot) => slot.1 += m,
            None => out.push((x, m)),
        }
    }
    out
}

impl RepresentationData {
    pub fn dim(&self) -> u32 {
        self.generic_blocks.iter().map(|b| b.mult).sum()
    }

    /// Distinct eigenangles of ρ(f) with total multiplicities.
    pub fn generic_angles(&self) -> Vec<Block> {
        aggregate(self.generic_blocks.iter().map(|b| (b.x, b.mult)))
            .into_iter()
            .map(|(x, mult)| Block { x, mult })
            .collect()
    }

    /// Multiplicity of e^{2πix} in ρ(f).
    pub fn generic_mult(&self, x: f64) -> u32 {
        self.generic_blocks
            .iter()
            .filter(|b| same_angle(b.x, x))
            .map(|b| b.mult)
            .sum()
    }

    fn blocks_of(&self, j: usize) -> Result<&[ExceptionalBlock], ModelError> {
        self.exceptional_blocks
            .get(j)
            .map(Vec::as_slice)
            .ok_or(ModelError::UnknownOrbit(j))
    }

    /// Distinct eigenangles of ρ(f_j) restricted to V^{parent}, or all of them.
    pub fn exceptional_angles(&self, j: usize, parent: Option<f64>) -> Result<Vec<Block>, ModelError> {
        let blocks = self.blocks_of(j)?;
        Ok(aggregate(
            blocks
                .iter()
                .filter(|b| parent.is_none_or(|p| same_angle(b.parent_x, p)))
                .map(|b| (b.x, b.mult)),
        )
        .into_iter()
        .map(|(x, mult)| Block { x, mult })
        .collect())
    }

    /// χ_ρ of a class.
    pub fn character(&self, class: ClassKind) -> Result<Complex64, ModelError> {
        match class {
            ClassKind::Generic { n } => Ok(self
                .generic_blocks
                .iter()
                .map(|b| f64::from(b.mult) * unit_phase(n as f64 * b.x))
                .sum()),
            ClassKind::Exceptional { j, r } => Ok(self
                .blocks_of(j)?
                .iter()
                .map(|b| f64::from(b.mult) * unit_phase(r as f64 * b.x))
                .sum()),
        }
    }

    /// χ_ρ(f_j^r | V^x): trace over the blocks refining the parent angle x.
    pub fn character_restricted(&self, j: usize, r: i64, parent_x: f64) -> Result<Complex64, ModelError> {
        Ok(self
            .blocks_of(j)?
            .iter()
            .filter(|b| same_angle(b.parent_x, parent_x))
            .map(|b| f64::from(b.mult) * unit_phase(r as f64 * b.x))
            .sum())
    }
}

/// χ'(M,ρ) = χ(N*)·dim ker(ρ(f) − 1) + Σ_j dim ker(ρ(f_j) − 1).
pub fn chi_prime(seifert: &SeifertData, rep: &RepresentationData) -> i64 {
    let generic: i64 = rep
        .generic_blocks
        .iter()
        .filter(|b| is_unit_angle(b.x))
        .map(|b| i64::from(b.mult))
        .sum();
    let exceptional: i64 = rep
        .exceptional_blocks
        .iter()
        .flatten()
        .filter(|b| is_unit_angle(b.x))
        .map(|b| i64::from(b.mult))
        .sum();
    seifert.chi_n_star * generic + exceptional
}

/// All closed-orbit classes with |ℓ(γ)| ≤ cutoff, excluding the constant class.
pub fn enumerate_orbits(seifert: &SeifertData, rep: &RepresentationData, cutoff: f64) -> Vec<OrbitClass> {
    let mut out = Vec::new();
    if !(cutoff > 0.0) {
        return out;
    }
    let ell = seifert.fiber_length;
    let generic_weight = ell * seifert.euler();
    let n_max = (cutoff / ell + 1e-12).floor() as i64;
    for n in 1..=n_max {
        for signed in [n, -n] {
            let kind = ClassKind::Generic { n: signed };
            out.push(OrbitClass {
                kind,
                length: signed as f64 * ell,
                character: rep.character(kind).unwrap_or_default(),
                e_weight: generic_weight,
            });
        }
    }
    for (j, orbit) in seifert.exceptional.iter().enumerate() {
        let alpha = i64::from(orbit.alpha.max(1));
        let ell_j = seifert.exceptional_length(j);
        let r_max = (cutoff / ell_j + 1e-12).floor() as i64;
        for r in 1..=r_max {
            if r % alpha == 0 {
                continue;
            }
            for signed in [r, -r] {
                let kind = ClassKind::Exceptional { j, r: signed };
                out.push(OrbitClass {
                    kind,
                    length: signed as f64 * ell_j,
                    character: rep.character(kind).unwrap_or_default(),
                    e_weight: ell_j,
                });
            }
        }
    }
    out
}

/// Seifert and holonomy data that passed [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    seifert: SeifertData,
    rep: RepresentationData,
}

impl Dataset {
    pub fn new(seifert: SeifertData, rep: RepresentationData) -> Result<Self, ModelError> {
        let report = validate(&seifert, &rep);
        if !report.passed() {
            return Err(ModelError::Invalid(report));
        }
        Ok(Self { seifert, rep })
    }

    pub fn seifert(&self) -> &SeifertData {
        &self.seifert
    }

    pub fn rep(&self) -> &RepresentationData {
        &self.rep
    }

    pub fn fiber_length(&self) -> f64 {
        self.seifert.fiber_length
    }

    /// a = 2π/ℓ(f), the spacing of the physical iT-spectrum.
    pub fn spectral_scale(&self) -> f64 {
        2.0 * PI / self.seifert.fiber_length
    }

    pub fn dim(&self) -> u32 {
        self.rep.dim()
    }

    pub fn chi_n_star(&self) -> i64 {
        self.seifert.chi_n_star
    }

    pub fn euler(&self) -> f64 {
        self.seifert.euler()
    }

    pub fn alpha(&self, j: usize) -> u32 {
        self.seifert.exceptional[j].alpha
    }

    pub fn exceptional_count(&self) -> usize {
        self.seifert.exceptional.len()
    }

    pub fn chi_prime(&self) -> i64 {
        chi_prime(&self.seifert, &self.rep)
    }

    pub fn enumerate_orbits(&self, cutoff: f64) -> Vec<OrbitClass> {
        enumerate_orbits(&self.seifert, &self.rep, cutoff)
    }

    /// Same data with fiber length ℓ(f) replaced.
    pub fn with_fiber_length(&self, fiber_length: f64) -> Result<Self, ModelError> {
        let mut seifert = self.seifert.clone();
        seifert.fiber_length = fiber_length;
        Self::new(seifert, self.rep.clone())
    }

    /// Same data with κ replaced.
    pub fn with_kappa(&self, kappa: BTreeMap<u32, f64>) -> Result<Self, ModelError> {
        let mut seifert = self.seifert.clone();
        seifert.kappa = kappa;
        Self::new(seifert, self.rep.clone())
    }
}
