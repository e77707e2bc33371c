//! Bayes factor and posterior model probabilities from closed-form
//! evidences.
//!
//! cargo run --example bayes_factor

use model_evidence::estimators::{bayes_factor, posterior_model_probabilities};
use model_evidence::harness::{ingest_dataset, radiata_models, RadiataPrior, RADIATA_PINE};
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/radiata_pine.csv");
    let table = ingest_dataset(&path, RADIATA_PINE, None)?;
    let logs = radiata_models(&table, &RadiataPrior::default())?
        .iter()
        .map(|m| m.model.analytic_log_evidence().expect("conjugate"))
        .collect::<Result<Vec<f64>, _>>()?;
    println!("BF21 = {:.4}", bayes_factor(logs[1], logs[0])?);
    let p = posterior_model_probabilities(&logs, &[0.5, 0.5])?;
    println!("P(model1 | y) = {:.3e}, P(model2 | y) = {:.6}", p[0], p[1]);
    Ok(())
}
