//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 numeric failure.

pub mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::eta::{Eta, EtaResult};
use crate::model::Dataset;
use crate::specfun::PrecisionConfig;
use crate::torsion::{Torsion, TorsionMethod, TorsionResult};
use crate::verify::{self, CheckStatus};
use crate::Estimate;

pub use manifest::{ComplexOut, Manifest, ManifestError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const TOL_ENV: &str = "CONTACT_SPECTRA_TOL";

#[derive(Debug, Parser)]
#[command(name = "contact-spectra", version, about = "Contact analytic torsion and eta invariants of CR Seifert manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic torsion T_Q, and the heat trace on a t-grid for heat methods.
    Torsion {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t = TorsionArg::Closed)]
        method: TorsionArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Eta invariant η(0), optional η(s) samples, and the residues at 1..k.
    Eta {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t = EtaArg::Geo)]
        method: EtaArg,
        /// Comma-separated sample points: `0.25`, `-0.5+1i`, `2-0.3i`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Runs every identity check on a manifest or a seeded random dataset.
    Verify {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        manifest: Option<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TorsionArg {
    Geo,
    Dyn,
    Top,
    Closed,
    Zeta,
}

impl TorsionArg {
    fn heat_method(self) -> Option<TorsionMethod> {
        match self {
            TorsionArg::Geo => Some(TorsionMethod::Geo),
            TorsionArg::Dyn => Some(TorsionMethod::Dyn),
            TorsionArg::Top => Some(TorsionMethod::Top),
            TorsionArg::Closed | TorsionArg::Zeta => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EtaArg {
    Geo,
    Dyn,
    Zeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

/// A failure with a stable code and the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    fn invalid(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            exit: EXIT_INVALID,
        }
    }
}

impl From<ManifestError> for CliError {
    fn from(e: ManifestError) -> Self {
        Self::invalid(e.code(), e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::EtaDataMissing(m) => Self::invalid("ETA_DATA_MISSING", m),
            Error::Model(m) => Self::invalid("INVALID_DATA", m.to_string()),
            other => Self {
                code: "NUMERIC",
                message: other.to_string(),
                exit: EXIT_NUMERIC,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::invalid("IO", e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::invalid("IO", e.to_string())
    }
}

struct Input {
    manifest: Manifest,
    data: Dataset,
    cfg: PrecisionConfig,
}

fn load(path: &Path, env_tol: Option<&str>) -> Result<Input, CliError> {
    let manifest = Manifest::load(path)?;
    let data = manifest.dataset()?;
    let cfg = manifest.precision(env_tol)?;
    Ok(Input { manifest, data, cfg })
}

#[derive(Serialize)]
struct GridRow {
    t: f64,
    value: f64,
    error_bound: f64,
}

fn write_csv(rows: &[GridRow], out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["t", "value", "error_bound"])?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(value: &impl Serialize, out: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::invalid("IO", e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Evaluates `f` at every t concurrently; rows keep grid order.
fn grid_rows(times: &[f64], f: impl Fn(f64) -> crate::Result<Estimate> + Sync) -> Result<Vec<GridRow>, CliError> {
    let rows: crate::Result<Vec<GridRow>> = times
        .par_iter()
        .map(|&t| {
            f(t).map(|e| GridRow {
                t,
                value: e.value,
                error_bound: e.error_bound,
            })
        })
        .collect();
    Ok(rows?)
}

fn torsion_json(r: &TorsionResult) -> serde_json::Value {
    json!({ "value": r.value, "error_bound": r.truncation_error_bound, "method": r.method })
}

fn run_torsion(input: Input, method: TorsionArg, format: OutputFormat, out: &mut dyn Write) -> Result<i32, CliError> {
    let tor = Torsion::new(&input.data, input.cfg);
    let heat = method.heat_method();
    if heat.is_none() && format == OutputFormat::Csv {
        return Err(CliError::invalid(
            "FORMAT_UNSUPPORTED",
            "CSV output is a t-grid; choose --method geo, dyn or top",
        ));
    }
    let torsion = match method {
        TorsionArg::Zeta => tor.torsion_from_zeta()?,
        _ => tor.torsion_closed_form()?,
    };
    let rows = match heat {
        Some(m) => grid_rows(&input.manifest.grid().times()?, |t| tor.heat_trace(m, t))?,
        None => Vec::new(),
    };
    if format == OutputFormat::Csv {
        return write_csv(&rows, out).map(|_| EXIT_OK);
    }
    let mut doc = json!({
        "torsion": torsion_json(&torsion),
        "log_torsion": torsion.value.ln(),
        "chi_prime": input.data.chi_prime(),
        "manifest": Manifest::from_dataset(&input.data),
    });
    if let Some(m) = heat {
        doc["heat_trace"] = json!({ "method": m, "grid": rows });
    }
    write_json(&doc, out)?;
    Ok(EXIT_OK)
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let imag = |s: &str| -> Option<f64> {
        match s {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => s.parse().ok(),
        }
    };
    match split {
        Some(i) => Some(Complex64::new(body[..i].parse().ok()?, imag(&body[i..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

fn eta_json(r: &EtaResult) -> serde_json::Value {
    json!({
        "value": r.value,
        "error_bound": r.truncation_error_bound,
        "imaginary_residue": r.imaginary_residue,
        "method": r.method,
    })
}

fn pole_index(s: Complex64, k: u32) -> Option<u32> {
    let p = s.re.round();
    (s.im == 0.0 && s.re == p && p >= 1.0 && p <= f64::from(k)).then_some(p as u32)
}

fn run_eta(
    input: Input,
    method: EtaArg,
    s_args: &[String],
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let eta = Eta::new(&input.data, input.cfg)?;
    let grid = input.manifest.grid();
    let mut samples = Vec::new();
    for raw in s_args {
        samples.push(parse_complex(raw).ok_or_else(|| CliError::invalid("BAD_NUMBER", format!("cannot read {raw:?} as a complex number")))?);
    }
    for z in &grid.s {
        samples.push(z.to_complex()?);
    }

    let times = grid.times()?;
    if format == OutputFormat::Csv {
        let rows = match method {
            EtaArg::Dyn => grid_rows(&times, |t| eta.theta_s_dyn(t))?,
            _ => grid_rows(&times, |t| eta.theta_s_top(t))?,
        };
        return write_csv(&rows, out).map(|_| EXIT_OK);
    }

    let value = match method {
        EtaArg::Geo => eta.eta0_geo()?,
        EtaArg::Dyn => eta.eta0_dyn()?,
        EtaArg::Zeta => eta.eta0_zeta()?,
    };
    let residues = (1..=eta.k())
        .map(|p| eta.eta_residue(p))
        .collect::<crate::Result<Vec<_>>>()?;
    let residue_json = |r: &crate::eta::EtaResidue| {
        json!({
            "p": r.p,
            "eta": r.eta,
            "phi": r.phi,
            "phi_stated": ComplexOut::from(r.phi_stated),
        })
    };
    let mut sample_docs = Vec::new();
    for s in samples {
        if let Some(p) = pole_index(s, eta.k()) {
            sample_docs.push(json!({
                "s": ComplexOut::from(s),
                "pole": true,
                "residue": residue_json(&residues[p as usize - 1]),
            }));
            continue;
        }
        let v = eta.eta_function(s)?;
        sample_docs.push(json!({
            "s": ComplexOut::from(s),
            "pole": false,
            "value": ComplexOut::from(v),
            "error_bound": input.cfg.tail_tol() * v.norm().max(1.0),
        }));
    }
    let doc = json!({
        "eta": eta_json(&value),
        "samples": sample_docs,
        "residues": residues.iter().map(residue_json).collect::<Vec<_>>(),
        "manifest": Manifest::from_dataset(&input.data),
    });
    write_json(&doc, out)?;
    Ok(EXIT_OK)
}

fn run_verify(
    manifest: Option<PathBuf>,
    seed: u64,
    format: ReportFormat,
    env_tol: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (data, cfg) = match manifest {
        Some(path) => {
            let input = load(&path, env_tol)?;
            (input.data, input.cfg)
        }
        None => (verify::random_dataset(seed), Manifest::default().precision(env_tol)?),
    };
    let report = verify::run_suite(&data, &cfg);
    match format {
        ReportFormat::Json => write_json(&report, out)?,
        ReportFormat::Text => {
            for c in &report.checks {
                let status = match c.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skipped => "SKIP",
                };
                writeln!(
                    out,
                    "{status} {:<28} dev {:.3e} tol {:.1e}  {}",
                    c.name, c.max_deviation, c.tolerance, c.identity
                )?;
            }
            writeln!(out, "fingerprint {}", report.fingerprint)?;
        }
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Runs a parsed command. `env_tol` is the value of `CONTACT_SPECTRA_TOL`.
pub fn execute(cli: Cli, env_tol: Option<&str>, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Torsion { manifest, method, format } => run_torsion(load(&manifest, env_tol)?, method, format, out),
        Command::Eta {
            manifest,
            method,
            s,
            format,
        } => run_eta(load(&manifest, env_tol)?, method, &s, format, out),
        Command::Verify {
            manifest,
            random: _,
            seed,
            format,
        } => run_verify(manifest, seed, format, env_tol, out),
    }
}

/// Parses arguments, runs, reports errors on `err`, and returns the exit code.
pub fn main_with<I, T>(args: I, env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(cli, env_tol, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {}", e.code, e.message);
            e.exit
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.25"), Some(Complex64::new(0.25, 0.0)));
        assert_eq!(parse_complex("-0.5+1i"), Some(Complex64::new(-0.5, 1.0)));
        assert_eq!(parse_complex("2-0.3i"), Some(Complex64::new(2.0, -0.3)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3-2e-1i"), Some(Complex64::new(1e-3, -0.2)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn poles_detected() {
        assert_eq!(pole_index(Complex64::new(1.0, 0.0), 2), Some(1));
        assert_eq!(pole_index(Complex64::new(2.0, 0.0), 2), Some(2));
        assert_eq!(pole_index(Complex64::new(3.0, 0.0), 2), None);
        assert_eq!(pole_index(Complex64::new(1.0, 0.1), 2), None);
    }
}
