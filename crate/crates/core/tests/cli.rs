use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use polariton::io::{inventory, RunManifest};

fn polariton(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polariton"));
    cmd.args(args)
        .env_remove("POLARITON_OUTPUT_DIR")
        .env_remove("POLARITON_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn assert_manifest_matches(dir: &Path) {
    let manifest = RunManifest::load(dir).unwrap();
    let listed: BTreeSet<_> = manifest.files.iter().map(|f| f.path.clone()).collect();
    let disk: BTreeSet<_> = inventory(dir)
        .unwrap()
        .into_iter()
        .map(|f| f.path)
        .collect();
    assert_eq!(listed, disk);
    assert_eq!(manifest.files, inventory(dir).unwrap());
    assert!(!dir.join(".lock").exists());
}

#[test]
fn predict_prints_beta() {
    let o = polariton(
        &["predict", "--alpha", "0", "--p", "3", "--model", "ep"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("beta = 0.2\n"), "{}", stdout(&o));
    let o = polariton(&["predict", "--alpha", "0.1", "--model", "nls"], &[]);
    assert!(stdout(&o).starts_with("beta = 0.8\n"), "{}", stdout(&o));
    let o = polariton(&["predict", "--alpha", "0.5"], &[]);
    assert!(stdout(&o).starts_with("beta > 0"));
}

#[test]
fn verify_passes_on_defaults() {
    let o = polariton(&["verify"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count() >= 8);
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn lemma_table() {
    let o = polariton(
        &["lemma", "--p", "3", "--delta", "0.1", "--eta", "0.001,0.01"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(polariton(&["bogus"], &[]).status.code(), Some(2));
    assert_eq!(
        polariton(&["predict", "--alpha", "0", "--model", "xyz"], &[])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[physics]\np = 0.5\n");
    let o = polariton(&["verify", "--config", &cfg], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("physics.p"));
    let cfg = write_config(dir.path(), "[grid]\ndim = 1\ndim = 2\n");
    let o = polariton(&["verify", "--config", &cfg], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn missing_config_is_an_io_error() {
    assert_eq!(
        polariton(&["verify", "--config", "/no/such/file.toml"], &[])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn simulate_writes_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim");
    let cfg = write_config(dir.path(), "[grid]\npoints = 64\n[solver]\nhorizon = 0.5\n");
    let o = polariton(
        &[
            "simulate",
            "--config",
            &cfg,
            "--output",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let traj = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("t,norm_phi,norm_psi,mass\n"));
    assert_eq!(traj.lines().count(), 52);
    assert_manifest_matches(&out);
    // The guaranteed existence time for unit data is short; the run warns.
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn sweep_writes_artifacts_and_reuses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let cfg = write_config(
        dir.path(),
        "[grid]\npoints = 128\n[sweep]\nalphas = [0.0, 0.2]\nepsilon_count = 4\n",
    );
    let o = polariton(
        &["sweep", "--config", &cfg],
        &[("POLARITON_OUTPUT_DIR", &out)],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}{}",
        stdout(&o),
        String::from_utf8_lossy(&o.stderr)
    );
    for f in [
        "crossings.csv",
        "betas.csv",
        "summary.json",
        "config.toml",
        "manifest.json",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let curves = std::fs::read_dir(out.join("curves")).unwrap().count();
    assert_eq!(curves, 1);
    assert_manifest_matches(&out);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["solver"]["simulations"], 5);
    let betas = std::fs::read_to_string(out.join("betas.csv")).unwrap();

    let o = polariton(
        &["sweep", "--config", &cfg, "--workers", "3"],
        &[("POLARITON_OUTPUT_DIR", &out)],
    );
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["solver"]["simulations"], 0);
    assert_eq!(
        std::fs::read_to_string(out.join("betas.csv")).unwrap(),
        betas
    );
    assert_manifest_matches(&out);
}

#[test]
fn short_horizon_is_an_incomplete_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("short");
    let cfg = write_config(
        dir.path(),
        "[grid]\npoints = 64\n[sweep]\nalphas = [0.0]\n[solver]\nhorizon = 0.1\n",
    );
    let o = polariton(
        &["sweep", "--config", &cfg, "--output", out.to_str().unwrap()],
        &[],
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(out.join("crossings.csv").exists());
    assert!(out.join("betas.csv").exists());
    assert_manifest_matches(&out);
}

#[test]
fn locked_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join(".lock"), "").unwrap();
    let o = polariton(&["simulate", "--output", dir.path().to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("locked"));
}
