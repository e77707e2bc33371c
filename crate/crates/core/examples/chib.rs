//! Chib's estimator from Gibbs output on the radiata pine regressions.
//!
//! cargo run --release --example chib

use model_evidence::estimators::{chib, ChibConfig, Diagnostics};
use model_evidence::harness::{
    ingest_dataset, radiata_models, BenchModel, RadiataPrior, RADIATA_PINE,
};
use model_evidence::math::RngStream;
use model_evidence::models::AnalyticEvidence;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/radiata_pine.csv");
    let table = ingest_dataset(&path, RADIATA_PINE, None)?;
    let config = ChibConfig {
        burn_in: 5_000,
        iterations: 30_000,
        reduced_burn_in: 1_000,
        reduced_iterations: 30_000,
        ..ChibConfig::default()
    };
    for named in radiata_models(&table, &RadiataPrior::default())? {
        let BenchModel::Regression(m) = &named.model else {
            unreachable!()
        };
        let mut rng = RngStream::for_task(1, &["chib", &named.name], 0);
        let est = chib(m, &config, None, &mut rng)?;
        let Diagnostics::Chib {
            star,
            log_ordinates,
            ..
        } = &est.diagnostics
        else {
            unreachable!()
        };
        println!(
            "{}: chib {:.5}  exact {:.5}  star {star:.3?}  log ordinates {log_ordinates:.4?}",
            named.name,
            est.log_value(),
            m.analytic_log_evidence()?
        );
    }
    Ok(())
}
