//! Single-site random-walk Metropolis on a Bayesian logistic regression of
//! the Pima data, plus the Laplace evidence at the posterior mode.
//!
//! cargo run --release --example logistic_metropolis

use model_evidence::estimators::{laplace, NewtonConfig};
use model_evidence::harness::{ingest_dataset, pima_models, BenchModel, PIMA};
use model_evidence::math::RngStream;
use model_evidence::samplers::{
    run_chain, ChainConfig, RandomWalkKernel, TemperedKernel, TemperedKernelConfig,
};
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pima.csv");
    let table = ingest_dataset(&path, PIMA, None)?;
    let models = pima_models(&table, 0.01)?;
    let BenchModel::Logistic(m) = &models[0].model else {
        unreachable!()
    };
    let kernel = RandomWalkKernel {
        model: m,
        config: TemperedKernelConfig::fixed(0.5f64.sqrt()),
    };
    let init = vec![0.0; 5];
    let out = run_chain(
        |s, r| kernel.transition(s, 1.0, r),
        &init,
        &ChainConfig::new(20_000, 0.2, 1)?,
        &mut RngStream::new(8, 0),
    )?;
    let mode = laplace(m, &init, &NewtonConfig::default())?;
    println!(
        "acceptance rate {:.3}",
        out.acceptance_rate().unwrap_or(f64::NAN)
    );
    println!("posterior mean {:.3?}", out.mean_state());
    println!("Laplace log evidence {:.4}", mode.log_value());
    Ok(())
}
