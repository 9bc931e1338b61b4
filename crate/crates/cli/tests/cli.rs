use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use magnetomech::coupling;
use magnetomech_cli::config::PB_DEFAULT_TOML;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_magnetomech"))
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("scenario.toml");
    std::fs::write(&path, text).unwrap();
    path
}

/// Bundled scenario with `from` replaced by `to`.
fn edited(from: &str, to: &str) -> String {
    assert!(PB_DEFAULT_TOML.contains(from), "{from}");
    PB_DEFAULT_TOML.replacen(from, to, 1)
}

fn run_cmd(cmd: &str, config: &Path, out: &Path) -> Output {
    bin()
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn run_default(cmd: &str, out: &Path) -> Output {
    bin().args([cmd, "--out"]).arg(out).output().unwrap()
}

fn read_table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let headers = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (headers, rows)
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (headers, rows) = read_table(path);
    let idx = headers.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[idx].parse().unwrap()).collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn design_succeeds_on_bundled_scenario() {
    let out = TempDir::new().unwrap();
    let o = run_default("design", out.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.path().join("design.csv").exists());
    assert!(out.path().join("design_flags.csv").exists());
}

#[test]
fn oversized_sphere_fails_physics_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), &edited("radius_um = 2.0", "radius_um = 5.0"));
    let o = run_cmd("design", &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    // tables are still written
    let flags = dir.path().join("out/design_flags.csv");
    let (_, rows) = read_table(&flags);
    assert!(rows.iter().any(|r| r[2] == "false"));
}

#[test]
fn negative_radius_names_the_field() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), &edited("radius_um = 2.0", "radius_um = -1.0"));
    let o = run_cmd("design", &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("sphere.radius_um"), "{}", stderr(&o));
}

#[test]
fn cool_without_drive_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        &edited("[drive]\ntarget_beta_rad = 1.0471975511965976\n", ""),
    );
    let o = run_cmd("cool", &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn malformed_toml_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[sphere\nradius_um = ");
    let o = run_cmd("design", &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_key_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), &edited("radius_um = 2.0", "radius_um = 2.0\nmass_kg = 1.0"));
    let o = run_cmd("design", &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for cmd in ["design", "sweep-beta", "budget"] {
        assert!(run_default(cmd, a.path()).status.success());
        assert!(run_default(cmd, b.path()).status.success());
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 5);
    for name in names {
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert_eq!(x, y, "{name:?}");
    }
}

#[test]
fn sweep_csv_reparses_with_full_grid() {
    let out = TempDir::new().unwrap();
    assert!(run_default("sweep-beta", out.path()).status.success());
    let beta = column(&out.path().join("sweep_beta.csv"), "beta_rad");
    assert_eq!(beta.len(), 156 * 3);
    assert!((beta[0] - 0.01).abs() < 1e-12);
    assert!((beta[beta.len() - 1] - 1.56).abs() < 1e-12);
}

#[test]
fn eta_column_matches_library() {
    let out = TempDir::new().unwrap();
    assert!(run_default("design", out.path()).status.success());
    let s = magnetomech_cli::parse_config(PB_DEFAULT_TOML)
        .unwrap()
        .validate()
        .unwrap();
    let w = magnetomech::trap::trap_frequency(&s.trap, &s.sphere.material).unwrap();
    let x_zp = coupling::zero_point_motion(s.sphere.mass(), w);
    let dphi = coupling::flux_derivative(&s.trap, &s.pickup, &s.sphere).unwrap();
    let eta = coupling::eta(x_zp, dphi);
    let (_, rows) = read_table(&out.path().join("design.csv"));
    let written = &rows.iter().find(|r| r[0] == "eta").unwrap()[1];
    assert_eq!(*written, format!("{eta:.8e}"));
}

#[test]
fn closed_protocol_revives_fully() {
    let out = TempDir::new().unwrap();
    let o = run_default("superpose", out.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let purity = column(&out.path().join("superpose.csv"), "purity_me");
    assert!((purity[0] - 1.0).abs() < 1e-6);
    assert!((purity[purity.len() - 1] - 1.0).abs() < 1e-6);
    let middle = purity[purity.len() / 2];
    assert!(middle < 1.0 - 1e-6);
}

#[test]
fn undriven_evolution_is_stationary() {
    let dir = TempDir::new().unwrap();
    let text = edited(
        "target_beta_rad = 1.0471975511965976",
        "amplitude_hz = 0.0\nfrequency_hz = 14.0e9",
    )
    .replacen("samples = 201", "duration_us = 100.0\nsamples = 11", 1);
    let cfg = write_config(dir.path(), &text);
    let o = run_cmd("evolve", &cfg, &dir.path().join("out"));
    assert!(o.status.success(), "{}", stderr(&o));
    let path = dir.path().join("out/evolve.csv");
    for name in ["n_phonon", "p_excited", "qubit_purity"] {
        let v = column(&path, name);
        assert_eq!(v.len(), 11);
        for x in &v {
            assert!((x - v[0]).abs() < 1e-9, "{name}: {v:?}");
        }
    }
    assert!((column(&path, "n_phonon")[0] - 2.0).abs() < 1e-9);
}
