use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use contact_spectra::cli::manifest::{Format, Manifest};
use contact_spectra::verify::examples;
use serde_json::Value;

fn manifest(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("manifests").join(name)
}

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], tol: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_contact-spectra"));
    cmd.args(args).env_remove("CONTACT_SPECTRA_TOL");
    if let Some(t) = tol {
        cmd.env("CONTACT_SPECTRA_TOL", t);
    }
    cmd.output().expect("binary runs")
}

fn path(name: &str) -> String {
    manifest(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn hopf_closed_form_torsion() {
    let out = run(&["torsion", &path("hopf.toml"), "--method", "closed"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out)["torsion"]["value"].as_f64().unwrap();
    assert!((v - 4.0 * PI * PI).abs() < 1e-10);
    assert!(format!("{v}").starts_with("39.478417"));
}

#[test]
fn zeta_method_agrees_with_closed_form() {
    let out = run(&["torsion", &path("half_twist.json"), "--method", "zeta"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out)["torsion"]["value"].as_f64().unwrap();
    assert!((v - 4.0).abs() < 1e-8);
}

#[test]
fn heat_grid_as_csv() {
    let out = run(&["torsion", &path("hopf.toml"), "--method", "geo", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["t", "value", "error_bound"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20);
    let ts: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
    assert!((ts[0] - 0.05).abs() < 1e-12 && (ts[19] - 20.0).abs() < 1e-9);
}

#[test]
fn heat_grid_in_json_follows_manifest_grid() {
    let out = run(&["torsion", &path("smooth_k2.toml"), "--method", "dyn"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let grid = doc["heat_trace"]["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 8);
    assert_eq!(doc["heat_trace"]["method"], "dyn");
}

#[test]
fn csv_needs_a_heat_method() {
    let out = run(&["torsion", &path("hopf.toml"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("FORMAT_UNSUPPORTED"));
}

#[test]
fn missing_representation_exits_2() {
    let out = run(&["torsion", &path("missing_rep.toml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("REP_MISSING"));
}

#[test]
fn unknown_method_exits_2() {
    let out = run(&["torsion", &path("hopf.toml"), "--method", "spectral"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_manifest_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "[seifert]\nchi_n_star = \"two\"\n").unwrap();
    let out = run(&["torsion", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("PARSE"));
}

#[test]
fn invalid_data_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(
        &p,
        "[seifert]\nchi_n_star = 1\nexceptional = [{ alpha = 3 }]\n[representation]\ngeneric_blocks = [{ x = 1 }]\nexceptional_blocks = [[{ x = \"1/2\", parent_x = 1 }]]\n",
    )
    .unwrap();
    let out = run(&["torsion", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("REP_COMPAT"), "{}", stderr(&out));
}

#[test]
fn eta_of_the_d_family() {
    let dir = tempfile::tempdir().unwrap();
    for d in -3..=3 {
        let p = dir.path().join(format!("d{d}.toml"));
        std::fs::write(
            &p,
            format!("[seifert]\nchi_n_star = 2\nk = 1\nkappa = {{ 1 = \"{d}\" }}\n[representation]\ngeneric_blocks = [{{ x = 1 }}]\n"),
        )
        .unwrap();
        for method in ["geo", "dyn", "zeta"] {
            let out = run(&["eta", p.to_str().unwrap(), "--method", method]);
            assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
            let v = json(&out)["eta"]["value"].as_f64().unwrap();
            assert!((v - f64::from(d) / 6.0).abs() < 1e-10, "d = {d}, {method}: {v}");
        }
    }
}

#[test]
fn eta_samples_and_pole() {
    let out = run(&["eta", &path("hopf.toml"), "--s", "0.25,1,-0.5+1i"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    let samples = doc["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 3);
    assert_eq!(samples[0]["pole"], false);
    assert!(samples[0]["value"]["re"].as_f64().unwrap().is_finite());
    assert!(samples[0]["error_bound"].as_f64().unwrap() > 0.0);
    assert_eq!(samples[1]["pole"], true);
    assert!((samples[1]["residue"]["eta"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(samples[2]["s"]["im"].as_f64(), Some(1.0));
    assert_eq!(doc["residues"].as_array().unwrap().len(), 1);
}

#[test]
fn eta_without_eta_data_exits_2() {
    let out = run(&["eta", &path("torsion_only.toml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("ETA_DATA_MISSING"));
}

#[test]
fn eta_trace_csv() {
    let out = run(&["eta", &path("smooth_k2.toml"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,value,error_bound\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn verify_hopf_passes() {
    let out = run(&["verify", &path("hopf.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = json(&out);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    assert_eq!(doc["fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_corrupted_kappa_fails_integrality() {
    let out = run(&["verify", &path("corrupted_kappa.toml")]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let failed: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["index_sig_integrality"]);
}

#[test]
fn verify_random_is_reproducible() {
    let a = run(&["verify", "--random", "--seed", "7"]);
    let b = run(&["verify", "--random", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "--random", "--seed", "8"]);
    assert_ne!(json(&a)["fingerprint"], json(&c)["fingerprint"]);
}

#[test]
fn verify_torsion_only_skips_eta_checks() {
    let out = run(&["verify", &path("torsion_only.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = json(&out);
    assert!(doc["checks"].as_array().unwrap().iter().any(|c| c["status"] == "skipped"));
}

#[test]
fn tolerance_from_environment() {
    let base = json(&run(&["verify", &path("hopf.toml")]));
    let tuned = run_env(&["verify", &path("hopf.toml")], Some("1e-13"));
    assert_eq!(tuned.status.code(), Some(0));
    assert_ne!(base["fingerprint"], json(&tuned)["fingerprint"]);
    let bad = run_env(&["verify", &path("hopf.toml")], Some("loose"));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_output_round_trips_through_the_manifest_parser() {
    for (cmd, file) in [("torsion", "alpha_three.toml"), ("eta", "smooth_k2.toml"), ("torsion", "torsion_only.toml")] {
        let out = run(&[cmd, &path(file)]);
        assert_eq!(out.status.code(), Some(0));
        let echoed = json(&out)["manifest"].to_string();
        let back = Manifest::parse(&echoed, Format::Json).unwrap().dataset().unwrap();
        let original = Manifest::load(&manifest(file)).unwrap().dataset().unwrap();
        assert_eq!(back, original);
    }
}

#[test]
fn shipped_manifests_match_the_library_examples() {
    let pairs = [
        ("hopf.toml", examples::hopf()),
        ("corrupted_kappa.toml", examples::corrupted_kappa()),
        ("smooth_k2.toml", examples::smooth_k2()),
        ("half_twist.json", examples::half_twist()),
        ("alpha_three.toml", examples::alpha_three()),
    ];
    for (file, data) in pairs {
        assert_eq!(Manifest::load(&manifest(file)).unwrap().dataset().unwrap(), data, "{file}");
    }
}
