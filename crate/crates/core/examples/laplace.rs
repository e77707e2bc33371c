//! Newton-mode Laplace approximation on both radiata pine regressions,
//! compared with the closed-form evidence.
//!
//! cargo run --example laplace

use model_evidence::estimators::{laplace, Diagnostics, NewtonConfig};
use model_evidence::harness::{
    ingest_dataset, radiata_models, BenchModel, RadiataPrior, RADIATA_PINE,
};
use model_evidence::models::AnalyticEvidence;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/radiata_pine.csv");
    let table = ingest_dataset(&path, RADIATA_PINE, None)?;
    let mut logs = Vec::new();
    for named in radiata_models(&table, &RadiataPrior::default())? {
        let BenchModel::Regression(m) = &named.model else {
            unreachable!()
        };
        let est = laplace(m, &named.model.prior_mean(), &NewtonConfig::default())?;
        let Diagnostics::Laplace {
            iterations,
            gradient_norm,
            ..
        } = est.diagnostics
        else {
            unreachable!()
        };
        let exact = m.analytic_log_evidence()?;
        println!(
            "{}: laplace {:.6}  exact {:.6}  ({iterations} Newton steps, |grad| {gradient_norm:.1e})",
            named.name,
            est.log_value(),
            exact
        );
        logs.push((est.log_value(), exact));
    }
    println!(
        "BF21 laplace {:.2}  exact {:.2}",
        (logs[1].0 - logs[0].0).exp(),
        (logs[1].1 - logs[0].1).exp()
    );
    Ok(())
}
