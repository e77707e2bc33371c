use model_evidence::estimators::Method;
use model_evidence::harness::report::quantile_sorted;
use model_evidence::harness::{oracle, run_experiment, ExperimentConfig, RunReport};
use std::path::{Path, PathBuf};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn config(text: &str, out: &Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::from_toml_str(text, &data_dir()).unwrap();
    c.output_dir = out.to_path_buf();
    c
}

const SMALL_NG: &str = r#"
name = "small"
replicates = 6
seed = 42
threads = 3
[benchmark]
kind = "normal_gamma"
n = 30
tau0 = [0.5, 2.0]
[estimators.exact]
[estimators.laplace]
[estimators.harmonic_mean]
iterations = 3000
[estimators.ais]
samples = 40
[estimators.power_posterior]
iterations = 200
ladder = { steps = 10, exponent = 4.0 }
"#;

#[test]
fn identical_configs_give_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    for sub in ["a", "b"] {
        run_experiment(&config(SMALL_NG, &tmp.path().join(sub))).unwrap();
    }
    for f in [
        "cells.csv",
        "report.json",
        "summary.csv",
        "bayes_factors.csv",
        "boxplot.csv",
    ] {
        let a = std::fs::read(tmp.path().join("a").join(f)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between runs");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let mut one = config(SMALL_NG, &tmp.path().join("one"));
    one.threads = 1;
    run_experiment(&one).unwrap();
    run_experiment(&config(SMALL_NG, &tmp.path().join("many"))).unwrap();
    assert_eq!(
        std::fs::read(tmp.path().join("one/cells.csv")).unwrap(),
        std::fs::read(tmp.path().join("many/cells.csv")).unwrap()
    );
}

#[test]
fn summaries_recompute_from_cells_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let report = run_experiment(&config(SMALL_NG, tmp.path())).unwrap();
    let mut rdr = csv::Reader::from_path(tmp.path().join("cells.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), report.cells.len());
    for s in &report.summaries {
        let mut v: Vec<f64> = rows
            .iter()
            .filter(|r| &r[0] == s.model && &r[1] == s.method.as_str() && &r[5] == "ok")
            .map(|r| r[6].parse().unwrap())
            .collect();
        v.sort_by(f64::total_cmp);
        let sum = s.log_evidence.as_ref().unwrap();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        assert_eq!(sum.count, v.len());
        assert!((sum.mean - mean).abs() <= 1e-12 * mean.abs());
        assert_eq!(sum.median, quantile_sorted(&v, 0.5));
        assert_eq!(sum.min, v[0]);
        assert_eq!(sum.max, v[v.len() - 1]);
        if v.len() > 1 {
            let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            assert!((sum.sd.unwrap() - sd).abs() <= 1e-9 * sd.max(1e-12));
            assert!((sum.se.unwrap() - sd / n.sqrt()).abs() <= 1e-9 * sd.max(1e-12));
        }
    }
}

#[test]
fn type7_quartiles() {
    let v = [1.0, 2.0, 3.0, 4.0];
    assert_eq!(quantile_sorted(&v, 0.25), 1.75);
    assert_eq!(quantile_sorted(&v, 0.5), 2.5);
    assert_eq!(quantile_sorted(&v, 0.75), 3.25);
}

#[test]
fn deterministic_methods_run_once_and_cells_are_canonical() {
    let tmp = tempfile::tempdir().unwrap();
    let report = run_experiment(&config(SMALL_NG, tmp.path())).unwrap();
    let count = |m: Method| report.cells.iter().filter(|c| c.method == m).count();
    assert_eq!(count(Method::Exact), 2);
    assert_eq!(count(Method::Laplace), 2);
    assert_eq!(count(Method::HarmonicMean), 12);
    let keys: Vec<_> = report
        .cells
        .iter()
        .map(|c| (c.method, c.replicate))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn report_round_trips_through_json() {
    let tmp = tempfile::tempdir().unwrap();
    let mut report = run_experiment(&config(SMALL_NG, tmp.path())).unwrap();
    let loaded = RunReport::load(tmp.path()).unwrap();
    // Timings and diagnostics live in their own files.
    for c in &mut report.cells {
        c.seconds = 0.0;
        c.diagnostics = None;
    }
    assert_eq!(loaded.cells, report.cells);
    assert_eq!(loaded.summaries, report.summaries);
    assert_eq!(loaded.bayes_factor_summaries, report.bayes_factor_summaries);
}

#[test]
fn single_replicate_exact_radiata() {
    let tmp = tempfile::tempdir().unwrap();
    let c = config(
        r#"
name = "radiata-exact"
replicates = 1
seed = 1
[benchmark]
kind = "radiata"
dataset = "radiata_pine.csv"
[estimators.exact]
"#,
        tmp.path(),
    );
    let report = run_experiment(&c).unwrap();
    assert_eq!(report.failed_cells(), 0);
    assert_eq!(report.cells.len(), 2);
    let bf = report
        .bayes_factor_summary("model2", "model1", Method::Exact)
        .unwrap();
    let s = bf.log_bayes_factor.as_ref().unwrap();
    assert_eq!(s.count, 1);
    assert!(s.sd.is_none() && s.se.is_none());
    let o = oracle(&c).unwrap();
    assert_eq!(s.mean, o.bayes_factors[0].log_bayes_factor);
}

#[test]
fn failed_cells_are_recorded_not_fatal() {
    let tmp = tempfile::tempdir().unwrap();
    let c = config(
        r#"
name = "pima-chib"
[benchmark]
kind = "pima"
dataset = "pima.csv"
tau_prior = 0.01
[estimators.laplace]
[estimators.chib]
"#,
        tmp.path(),
    );
    let report = run_experiment(&c).unwrap();
    assert_eq!(report.failed_cells(), 2);
    assert!(report
        .cells
        .iter()
        .filter(|c| c.method == Method::Chib)
        .all(|c| c.error.is_some()));
    assert!(report
        .cells
        .iter()
        .filter(|c| c.method == Method::Laplace)
        .all(|c| c.log_evidence.is_some()));
}
