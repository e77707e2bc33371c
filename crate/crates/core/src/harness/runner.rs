use super::benchmark::{pima_models, radiata_models, NamedModel};
use super::config::{BenchmarkConfig, EstimatorSettings, ExperimentConfig};
use super::dataset::{ingest_dataset, DatasetRecord, PIMA, RADIATA_PINE};
use super::execute::run_estimator;
use super::report::{emit_boxplot_data, CellRecord, ReferenceValue, RunReport};
use super::{HarnessError, REPORT_FILE};
use crate::math::RngStream;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs::File;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

/// Ingests the benchmark's dataset, if any, and builds its models.
pub fn load_benchmark(
    benchmark: &BenchmarkConfig,
) -> Result<(Vec<NamedModel>, Vec<DatasetRecord>), HarnessError> {
    match benchmark {
        BenchmarkConfig::Radiata {
            dataset,
            sha256,
            prior,
        } => {
            let table = ingest_dataset(dataset, RADIATA_PINE, sha256.as_deref())?;
            Ok((radiata_models(&table, prior)?, vec![table.record]))
        }
        BenchmarkConfig::Pima {
            dataset,
            sha256,
            tau_prior,
        } => {
            let table = ingest_dataset(dataset, PIMA, sha256.as_deref())?;
            Ok((pima_models(&table, *tau_prior)?, vec![table.record]))
        }
        BenchmarkConfig::NormalGamma(design) => Ok((design.models()?, Vec::new())),
    }
}

/// Schema, checksum and model-construction checks without running anything.
pub fn validate_experiment(config: &ExperimentConfig) -> Result<Vec<DatasetRecord>, HarnessError> {
    let (models, datasets) = load_benchmark(&config.benchmark)?;
    check_pairs(config, &models)?;
    Ok(datasets)
}

fn check_pairs(config: &ExperimentConfig, models: &[NamedModel]) -> Result<(), HarnessError> {
    for pair in &config.bayes_factors {
        for name in pair {
            if !models.iter().any(|m| &m.name == name) {
                return Err(HarnessError::Config(format!(
                    "Bayes factor names unknown model {name:?}"
                )));
            }
        }
    }
    Ok(())
}

fn reference_values(models: &[NamedModel]) -> Result<Vec<ReferenceValue>, HarnessError> {
    models
        .iter()
        .filter_map(|m| {
            m.model.analytic_log_evidence().map(|v| {
                Ok(ReferenceValue {
                    model: m.name.clone(),
                    log_evidence: v?,
                })
            })
        })
        .collect()
}

struct Cell<'a> {
    model: &'a NamedModel,
    settings: &'a EstimatorSettings,
    replicate: usize,
}

/// Canonical cell order: estimator, then replicate, then model.
/// Deterministic estimators get a single replicate.
fn cells<'a>(config: &'a ExperimentConfig, models: &'a [NamedModel]) -> Vec<Cell<'a>> {
    let mut out = Vec::new();
    for settings in &config.estimators {
        let reps = if settings.method().is_stochastic() {
            config.replicates
        } else {
            1
        };
        for replicate in 0..reps {
            for model in models {
                out.push(Cell {
                    model,
                    settings,
                    replicate,
                });
            }
        }
    }
    out
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

fn execute(cell: &Cell<'_>, seed: u64) -> CellRecord {
    let method = cell.settings.method();
    let mut rng = RngStream::for_task(
        seed,
        &[method.as_str(), &cell.model.name],
        cell.replicate as u64,
    );
    let stream_id = rng.stream_id();
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| {
        run_estimator(&cell.model.model, cell.settings, &mut rng)
    }));
    let seconds = start.elapsed().as_secs_f64();
    let (log_evidence, error, diagnostics) = match result {
        Ok(Ok(e)) => (Some(e.log_value()), None, Some(e.diagnostics)),
        Ok(Err(e)) => (None, Some(e.to_string()), None),
        Err(p) => (None, Some(format!("panic: {}", panic_message(p))), None),
    };
    log::info!(
        "{method} {} replicate {}: {} ({seconds:.2} s)",
        cell.model.name,
        cell.replicate,
        log_evidence.map_or_else(
            || format!("failed: {}", error.as_deref().unwrap_or("")),
            |v| format!("{v:.6}")
        )
    );
    CellRecord {
        model: cell.model.name.clone(),
        method,
        replicate: cell.replicate,
        seed,
        stream_id,
        log_evidence,
        error,
        seconds,
        diagnostics,
    }
}

/// Appends rows to `cells.csv` in canonical order as results arrive, flushing
/// each one so an interrupted run leaves only complete rows.
fn write_in_order(
    path: &Path,
    total: usize,
    rx: mpsc::Receiver<(usize, CellRecord)>,
) -> Result<Vec<CellRecord>, HarnessError> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| HarnessError::Csv(e.to_string());
    w.write_record(CellRecord::CSV_HEADER).map_err(csv_err)?;
    w.flush().map_err(|e| HarnessError::io(path, e))?;
    let mut pending = BTreeMap::new();
    let mut done = Vec::with_capacity(total);
    for (i, rec) in rx {
        pending.insert(i, rec);
        while let Some(rec) = pending.remove(&done.len()) {
            w.write_record(rec.csv_fields()).map_err(csv_err)?;
            w.flush().map_err(|e| HarnessError::io(path, e))?;
            done.push(rec);
        }
    }
    Ok(done)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), HarnessError> {
    let p = dir.join(name);
    std::fs::write(&p, contents).map_err(|e| HarnessError::io(&p, e))
}

/// Runs every (estimator, replicate, model) cell and writes the report
/// directory. Cell failures are recorded, not propagated.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let (models, datasets) = load_benchmark(&config.benchmark)?;
    check_pairs(config, &models)?;
    let reference = reference_values(&models)?;
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    write_file(
        dir,
        "config.json",
        &serde_json::to_string_pretty(config).expect("config serializes"),
    )?;

    let cells = cells(config, &models);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let (tx, rx) = mpsc::channel();
    let csv_path = dir.join("cells.csv");
    let records = std::thread::scope(|s| {
        let writer = s.spawn(|| write_in_order(&csv_path, cells.len(), rx));
        pool.install(|| {
            cells
                .par_iter()
                .enumerate()
                .for_each_with(tx, |tx, (i, cell)| {
                    // The receiver only hangs up after an I/O error, reported below.
                    let _ = tx.send((i, execute(cell, config.seed)));
                })
        });
        writer.join().expect("writer thread")
    })?;

    let report = RunReport::assemble(
        config.name.clone(),
        config.seed,
        config.replicates,
        datasets,
        models.iter().map(|m| m.name.clone()).collect(),
        reference,
        config.bayes_factors.clone(),
        records,
    );
    write_file(
        dir,
        REPORT_FILE,
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    write_file(dir, "summary.csv", &report.summary_csv())?;
    write_file(dir, "bayes_factors.csv", &report.bayes_factor_csv())?;
    write_file(
        dir,
        "bayes_factor_summary.csv",
        &report.bayes_factor_summary_csv(),
    )?;
    write_file(dir, "boxplot.csv", &emit_boxplot_data(&report))?;
    write_file(dir, "diagnostics.jsonl", &report.diagnostics_jsonl())?;
    write_file(dir, "timings.csv", &report.timings_csv())?;
    write_file(dir, "speed.csv", &report.speed_csv())?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub model: String,
    pub analytic: Option<f64>,
    /// `Err` carries the reason the grid was not trusted.
    pub quadrature: Option<Result<f64, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleBayesFactor {
    pub numerator: String,
    pub denominator: String,
    pub log_bayes_factor: f64,
    pub bayes_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub datasets: Vec<DatasetRecord>,
    pub models: Vec<OracleRow>,
    pub bayes_factors: Vec<OracleBayesFactor>,
}

/// Closed-form and quadrature log evidences; no sampling.
pub fn oracle(config: &ExperimentConfig) -> Result<OracleReport, HarnessError> {
    let (models, datasets) = load_benchmark(&config.benchmark)?;
    check_pairs(config, &models)?;
    let rows = models
        .iter()
        .map(|m| {
            Ok(OracleRow {
                model: m.name.clone(),
                analytic: m.model.analytic_log_evidence().transpose()?,
                quadrature: m
                    .model
                    .quadrature_log_evidence()
                    .map(|r| r.map_err(|e| e.to_string())),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let value = |name: &str| {
        rows.iter()
            .find(|r| r.model == name)
            .and_then(|r| r.analytic.or(r.quadrature.clone()?.ok()))
    };
    let bayes_factors = config
        .bayes_factors
        .iter()
        .filter_map(|[a, b]| {
            let l = value(a)? - value(b)?;
            Some(OracleBayesFactor {
                numerator: a.clone(),
                denominator: b.clone(),
                log_bayes_factor: l,
                bayes_factor: l.exp(),
            })
        })
        .collect();
    Ok(OracleReport {
        datasets,
        models: rows,
        bayes_factors,
    })
}
