//! The harmonic-mean estimator barely reacts to the prior while the true
//! evidence moves by several nats.
//!
//! cargo run --release --example harmonic_mean

use model_evidence::estimators::harmonic_mean;
use model_evidence::harness::{BenchModel, NormalGammaDesign};
use model_evidence::math::RngStream;
use model_evidence::models::{AnalyticEvidence, Model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let design = NormalGammaDesign::prior_sensitivity(2024);
    println!("{:>10} {:>12} {:>12}", "tau0", "analytic", "harmonic");
    for (i, named) in design.models()?.iter().enumerate() {
        let BenchModel::NormalGamma(m) = &named.model else {
            unreachable!()
        };
        let mut rng = RngStream::for_task(7, &["harmonic", &named.name], 0);
        let lls: Vec<f64> = (0..100_000)
            .map(|_| m.log_likelihood(&m.sample_posterior(&mut rng)))
            .collect();
        let hm = harmonic_mean(&lls)?;
        println!(
            "{:>10.0e} {:>12.4} {:>12.4}",
            design.tau0[i],
            m.analytic_log_evidence()?,
            hm.log_value()
        );
    }
    Ok(())
}
