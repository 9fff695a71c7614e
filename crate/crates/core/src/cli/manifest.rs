//! Input documents: Seifert data, representation, precision and grid, as TOML
//! or JSON.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::model::{
    Block, Dataset, ExceptionalBlock, ExceptionalOrbit, ModelError, RepresentationData, SeifertData,
};
use crate::specfun::PrecisionConfig;

/// A real number written as a float, an integer, or a string `"p/q"`,
/// `"-3"`, `"0.25"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    pub fn to_f64(&self) -> Result<f64, ManifestError> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(s) => parse_real(s).ok_or_else(|| ManifestError::BadNumber(s.clone())),
        }
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Float(v)
    }
}

fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Rational64::new(p, q).to_f64();
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// A complex number as `{re, im}`; a bare real is accepted with im = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexInput {
    Real(Number),
    Pair {
        re: Number,
        #[serde(default = "zero")]
        im: Number,
    },
}

fn zero() -> Number {
    Number::Float(0.0)
}

impl ComplexInput {
    pub fn to_complex(&self) -> Result<Complex64, ManifestError> {
        match self {
            ComplexInput::Real(r) => Ok(Complex64::new(r.to_f64()?, 0.0)),
            ComplexInput::Pair { re, im } => Ok(Complex64::new(re.to_f64()?, im.to_f64()?)),
        }
    }
}

/// `{re, im}` for output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceptionalSection {
    pub alpha: u32,
    #[serde(default)]
    pub rotation_numbers: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeifertSection {
    pub chi_n_star: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_length: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub kappa: BTreeMap<String, Number>,
    #[serde(default)]
    pub exceptional: Vec<ExceptionalSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSection {
    pub x: Number,
    #[serde(default = "one")]
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceptionalBlockSection {
    pub x: Number,
    #[serde(default = "one")]
    pub mult: u32,
    pub parent_x: Number,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationSection {
    pub generic_blocks: Vec<BlockSection>,
    #[serde(default)]
    pub exceptional_blocks: Vec<Vec<ExceptionalBlockSection>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_maclaurin_terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_guard_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_t_min")]
    pub t_min: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_log")]
    pub log_spaced: bool,
    /// Sample points for η(s).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<ComplexInput>,
}

fn default_t_min() -> f64 {
    0.05
}
fn default_t_max() -> f64 {
    20.0
}
fn default_points() -> usize {
    20
}
fn default_log() -> bool {
    true
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            t_min: default_t_min(),
            t_max: default_t_max(),
            points: default_points(),
            log_spaced: true,
            s: Vec::new(),
        }
    }
}

impl GridSection {
    pub fn times(&self) -> Result<Vec<f64>, ManifestError> {
        if !(self.t_min > 0.0 && self.t_max >= self.t_min && self.t_max.is_finite()) || self.points == 0 {
            return Err(ManifestError::BadGrid(format!(
                "need 0 < t_min ≤ t_max and points ≥ 1, got [{}, {}] with {} points",
                self.t_min, self.t_max, self.points
            )));
        }
        if self.log_spaced {
            return Ok(crate::verify::log_spaced(self.t_min, self.t_max, self.points));
        }
        if self.points == 1 {
            return Ok(vec![self.t_min]);
        }
        let step = (self.t_max - self.t_min) / (self.points - 1) as f64;
        Ok((0..self.points).map(|i| self.t_min + step * i as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seifert: Option<SeifertSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

impl Format {
    /// `.json` is JSON; everything else is read as TOML.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Toml,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ManifestError {
    Io(String),
    Parse(String),
    SeifertMissing,
    RepMissing,
    BadNumber(String),
    BadKappaKey(String),
    BadGrid(String),
    BadPrecision(String),
    Invalid(ModelError),
}

impl ManifestError {
    pub fn code(&self) -> &'static str {
        match self {
            ManifestError::Io(_) => "IO",
            ManifestError::Parse(_) => "PARSE",
            ManifestError::SeifertMissing => "SEIFERT_MISSING",
            ManifestError::RepMissing => "REP_MISSING",
            ManifestError::BadNumber(_) => "BAD_NUMBER",
            ManifestError::BadKappaKey(_) => "KAPPA_KEY",
            ManifestError::BadGrid(_) => "BAD_GRID",
            ManifestError::BadPrecision(_) => "BAD_PRECISION",
            ManifestError::Invalid(_) => "INVALID_DATA",
        }
    }
}

impl fmt::Display for ManifestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifestError::Io(m) | ManifestError::Parse(m) => f.write_str(m),
            ManifestError::SeifertMissing => f.write_str("manifest has no [seifert] section"),
            ManifestError::RepMissing => f.write_str("manifest has no [representation] section"),
            ManifestError::BadNumber(s) => write!(f, "cannot read {s:?} as a real number"),
            ManifestError::BadKappaKey(s) => write!(f, "kappa key {s:?} is not a positive integer"),
            ManifestError::BadGrid(m) | ManifestError::BadPrecision(m) => f.write_str(m),
            ManifestError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ManifestError {}

impl Manifest {
    pub fn parse(text: &str, format: Format) -> Result<Self, ManifestError> {
        match format {
            Format::Toml => toml::from_str(text).map_err(|e| ManifestError::Parse(e.to_string())),
            Format::Json => serde_json::from_str(text).map_err(|e| ManifestError::Parse(e.to_string())),
        }
    }

    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ManifestError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, Format::from_path(path))
    }

    /// A manifest describing `data` exactly, with no precision or grid section.
    pub fn from_dataset(data: &Dataset) -> Self {
        let s = data.seifert();
        let r = data.rep();
        Manifest {
            seifert: Some(SeifertSection {
                chi_n_star: s.chi_n_star,
                fiber_length: Some(s.fiber_length.into()),
                k: s.k,
                kappa: s.kappa.iter().map(|(m, v)| (m.to_string(), (*v).into())).collect(),
                exceptional: s
                    .exceptional
                    .iter()
                    .map(|e| ExceptionalSection {
                        alpha: e.alpha,
                        rotation_numbers: e.rotation_numbers.clone(),
                    })
                    .collect(),
            }),
            representation: Some(RepresentationSection {
                generic_blocks: r
                    .generic_blocks
                    .iter()
                    .map(|b| BlockSection {
                        x: b.x.into(),
                        mult: b.mult,
                    })
                    .collect(),
                exceptional_blocks: r
                    .exceptional_blocks
                    .iter()
                    .map(|blocks| {
                        blocks
                            .iter()
                            .map(|b| ExceptionalBlockSection {
                                x: b.x.into(),
                                mult: b.mult,
                                parent_x: b.parent_x.into(),
                            })
                            .collect()
                    })
                    .collect(),
            }),
            precision: None,
            grid: None,
        }
    }

    pub fn dataset(&self) -> Result<Dataset, ManifestError> {
        let s = self.seifert.as_ref().ok_or(ManifestError::SeifertMissing)?;
        let r = self.representation.as_ref().ok_or(ManifestError::RepMissing)?;
        let mut kappa = BTreeMap::new();
        for (key, v) in &s.kappa {
            let m: u32 = key
                .trim()
                .parse()
                .ok()
                .filter(|m| *m > 0)
                .ok_or_else(|| ManifestError::BadKappaKey(key.clone()))?;
            kappa.insert(m, v.to_f64()?);
        }
        let seifert = SeifertData {
            chi_n_star: s.chi_n_star,
            fiber_length: match &s.fiber_length {
                Some(n) => n.to_f64()?,
                None => 2.0 * std::f64::consts::PI,
            },
            exceptional: s
                .exceptional
                .iter()
                .map(|e| ExceptionalOrbit {
                    alpha: e.alpha,
                    rotation_numbers: e.rotation_numbers.clone(),
                })
                .collect(),
            k: s.k,
            kappa,
        };
        let generic_blocks = r
            .generic_blocks
            .iter()
            .map(|b| Ok(Block { x: b.x.to_f64()?, mult: b.mult }))
            .collect::<Result<Vec<_>, ManifestError>>()?;
        let exceptional_blocks = r
            .exceptional_blocks
            .iter()
            .map(|blocks| {
                blocks
                    .iter()
                    .map(|b| {
                        Ok(ExceptionalBlock {
                            x: b.x.to_f64()?,
                            mult: b.mult,
                            parent_x: b.parent_x.to_f64()?,
                        })
                    })
                    .collect::<Result<Vec<_>, ManifestError>>()
            })
            .collect::<Result<Vec<_>, ManifestError>>()?;
        let rep = RepresentationData {
            generic_blocks,
            exceptional_blocks,
        };
        Dataset::new(seifert, rep).map_err(ManifestError::Invalid)
    }

    /// Defaults, then the `precision` section, then `env_tol` if given.
    pub fn precision(&self, env_tol: Option<&str>) -> Result<PrecisionConfig, ManifestError> {
        let mut cfg = PrecisionConfig::default();
        if let Some(p) = &self.precision {
            if let Some(v) = p.target_abs_tol {
                cfg.target_abs_tol = v;
            }
            if let Some(v) = p.euler_maclaurin_terms {
                cfg.euler_maclaurin_terms = v;
            }
            if let Some(v) = p.series_guard_factor {
                cfg.series_guard_factor = v;
            }
        }
        if let Some(raw) = env_tol {
            cfg.target_abs_tol = parse_real(raw)
                .ok_or_else(|| ManifestError::BadPrecision(format!("CONTACT_SPECTRA_TOL={raw:?} is not a number")))?;
        }
        cfg.validate()
            .map_err(|e| ManifestError::BadPrecision(e.to_string()))?;
        Ok(cfg)
    }

    pub fn grid(&self) -> GridSection {
        self.grid.clone().unwrap_or_default()
    }
}
