use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfock"))
        .args(args)
        .output()
        .unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn shipped(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const ANYON: &str = r#"{ "grid": { "uniform": { "m": 3 } }, "kernel": { "anyonic": { "re": 0.0, "im": 1.0 } },
  "lambda": 0.5, "cutoff": 4 }"#;

#[test]
fn verify_passes_on_shipped_configs() {
    for name in [
        "boson.json",
        "anyonic_i.json",
        "cube_root.json",
        "levy_two_atoms.json",
    ] {
        let out = qfock(&["verify", "--config", &shipped(name)]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["pass"], true);
        assert!(!v["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn each_command_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "levy.json",
        r#"{ "grid": { "uniform": { "m": 3 } }, "kernel": { "anyonic": { "re": -0.5, "im": 0.8660254037844386 } },
  "lambda": 0.7, "cutoff": 4, "jumps": { "atoms": [ { "x": -1.0, "w": 0.5 }, { "x": 1.0, "w": 0.5 } ] } }"#,
    );
    for cmd in ["moments", "cumulants", "wick", "levy", "chaos", "exclusion"] {
        let out = qfock(&[cmd, "--config", &cfg]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{cmd}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["command"], cmd);
    }
}

#[test]
fn residual_failure_exits_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "tight.json",
        &ANYON.replace(
            r#""cutoff": 4 }"#,
            r#""cutoff": 4, "tolerances": { "default": 1e-300 } }"#,
        ),
    );
    let out = qfock(&["moments", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("moment_oracle"));
}

#[test]
fn config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad_json = write(&dir, "bad.json", "{ not json");
    let unknown = write(
        &dir,
        "unknown.json",
        r#"{ "grid": { "uniform": { "m": 2 } }, "kernel": "boson", "cutoff": 3, "colour": 1 }"#,
    );
    let missing = dir
        .path()
        .join("absent.json")
        .to_string_lossy()
        .into_owned();
    for path in [shipped("malformed_kernel.json"), bad_json, unknown, missing] {
        let out = qfock(&["verify", "--config", &path]);
        assert_eq!(out.status.code(), Some(2), "{path}");
    }
    assert_eq!(qfock(&["verify"]).status.code(), Some(2));
}

#[test]
fn envelope_exits_three() {
    let out = qfock(&["verify", "--config", &shipped("too_large.json")]);
    assert_eq!(out.status.code(), Some(3));
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cut.json",
        r#"{ "grid": { "uniform": { "m": 2 } }, "kernel": "boson", "cutoff": 40 }"#,
    );
    assert_eq!(qfock(&["moments", "--config", &cfg]).status.code(), Some(3));
}

#[test]
fn csv_output_is_long_format() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "anyon.json", ANYON);
    let out = qfock(&["moments", "--config", &cfg, "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("section,key,value"));
    assert!(lines.all(|l| l.split(',').count() >= 3));
    assert!(text.contains("check,moment_oracle.pass,true"));
}

#[test]
fn same_seed_same_bytes() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "anyon.json", ANYON);
    let a = qfock(&["verify", "--config", &cfg, "--seed", "7"]);
    let b = qfock(&["verify", "--config", &cfg, "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
}
