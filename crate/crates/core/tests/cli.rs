use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn evidence(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_evidence"));
    cmd.args(args).env_remove("EVIDENCE_OUTPUT_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("exp.toml");
    std::fs::write(&p, body).unwrap();
    p
}

fn radiata_config(dir: &Path, dataset: &Path, extra: &str) -> PathBuf {
    write_config(
        dir,
        &format!(
            "name = \"cli\"\noutput_dir = \"out\"\n[benchmark]\nkind = \"radiata\"\ndataset = {:?}\n{extra}\n[estimators.exact]\n[estimators.laplace]\n",
            dataset.display().to_string()
        ),
    )
}

#[test]
fn run_writes_report_and_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = radiata_config(tmp.path(), &data_dir().join("radiata_pine.csv"), "");
    let out = evidence(&["run", cfg.to_str().unwrap()], &[]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in [
        "report.json",
        "cells.csv",
        "summary.csv",
        "boxplot.csv",
        "config.json",
    ] {
        assert!(tmp.path().join("out").join(f).exists(), "missing {f}");
    }
}

#[test]
fn output_dir_env_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = radiata_config(tmp.path(), &data_dir().join("radiata_pine.csv"), "");
    let target = tmp.path().join("elsewhere");
    let out = evidence(
        &["run", cfg.to_str().unwrap()],
        &[("EVIDENCE_OUTPUT_DIR", &target)],
    );
    assert!(out.status.success());
    assert!(target.join("report.json").exists());
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn truncated_dataset_is_a_row_count_error() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data_dir().join("radiata_pine.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let short = tmp.path().join("short.csv");
    std::fs::write(&short, lines[..lines.len() - 3].join("\n") + "\n").unwrap();
    let cfg = radiata_config(tmp.path(), &short, "");
    let out = evidence(&["validate", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row-count mismatch"));
}

#[test]
fn wrong_checksum_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = radiata_config(
        tmp.path(),
        &data_dir().join("radiata_pine.csv"),
        &format!("sha256 = \"{}\"", "0".repeat(64)),
    );
    let out = evidence(&["run", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(6));
    assert!(!tmp.path().join("out/cells.csv").exists());
}

#[test]
fn unknown_config_key_exits_with_config_code() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "name = \"x\"\nreplicate = 3\n[benchmark]\nkind = \"normal_gamma\"\n",
    );
    let out = evidence(&["validate", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_cells_give_exit_code_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &format!(
            "name = \"p\"\noutput_dir = \"out\"\n[benchmark]\nkind = \"pima\"\ntau_prior = 0.01\ndataset = {:?}\n[estimators.chib]\n",
            data_dir().join("pima.csv").display().to_string()
        ),
    );
    let out = evidence(&["run", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(tmp.path().join("out/report.json").exists());
}

#[test]
fn oracle_and_boxplot_verbs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = radiata_config(tmp.path(), &data_dir().join("radiata_pine.csv"), "");
    let out = evidence(&["oracle", cfg.to_str().unwrap()], &[]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("BF[model2/model1]"));

    assert!(evidence(&["run", cfg.to_str().unwrap()], &[])
        .status
        .success());
    let dest = tmp.path().join("bp.csv");
    let out = evidence(
        &[
            "boxplot",
            tmp.path().join("out").to_str().unwrap(),
            "-o",
            dest.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dest).unwrap();
    assert!(text.starts_with("method,replicate,quantity,value\n"));
    assert!(text.lines().any(|l| l.starts_with("exact,,")));
}

/// Killing a run mid-way leaves `cells.csv` holding a prefix of the full
/// run's rows, each complete.
#[test]
fn interrupted_run_leaves_a_clean_prefix() {
    let tmp = tempfile::tempdir().unwrap();
    let body = "name = \"slow\"\noutput_dir = \"out\"\nreplicates = 40\nthreads = 1\n[benchmark]\nkind = \"normal_gamma\"\n\
                [estimators.harmonic_mean]\niterations = 200000\n";
    let cfg = write_config(tmp.path(), body);
    let cells = tmp.path().join("out/cells.csv");
    let mut child = Command::new(env!("CARGO_BIN_EXE_evidence"))
        .args(["run", cfg.to_str().unwrap()])
        .env_remove("EVIDENCE_OUTPUT_DIR")
        .spawn()
        .unwrap();
    let start = Instant::now();
    while std::fs::read_to_string(&cells).map_or(0, |t| t.lines().count()) < 3 {
        assert!(
            start.elapsed() < Duration::from_secs(60),
            "run produced no rows"
        );
        std::thread::sleep(Duration::from_millis(20));
    }
    child.kill().unwrap();
    child.wait().unwrap();
    let partial = std::fs::read_to_string(&cells).unwrap();
    assert!(partial.ends_with('\n'));

    let full_dir = tempfile::tempdir().unwrap();
    let out = evidence(
        &["run", cfg.to_str().unwrap()],
        &[("EVIDENCE_OUTPUT_DIR", full_dir.path())],
    );
    assert!(out.status.success());
    let full = std::fs::read_to_string(full_dir.path().join("cells.csv")).unwrap();
    assert!(full.starts_with(&partial));
    assert!(partial.lines().count() < full.lines().count());
}
