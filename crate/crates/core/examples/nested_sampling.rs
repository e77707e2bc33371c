//! Nested sampling with clone-and-Metropolis replacement of the worst live
//! point.
//!
//! cargo run --release --example nested_sampling

use model_evidence::estimators::{nested_sampling, Diagnostics, NestedConfig};
use model_evidence::harness::{BenchModel, NormalGammaDesign};
use model_evidence::math::RngStream;
use model_evidence::models::AnalyticEvidence;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let models = NormalGammaDesign::seeded_instance().models()?;
    let BenchModel::NormalGamma(m) = &models[0].model else {
        unreachable!()
    };
    let exact = m.analytic_log_evidence()?;
    for live_points in [100, 400, 1000] {
        let config = NestedConfig {
            live_points,
            ..NestedConfig::default()
        };
        let est = nested_sampling(m, &config, &mut RngStream::new(5, live_points as u64))?;
        let Diagnostics::NestedSampling {
            iterations,
            stalled_levels,
            ..
        } = est.diagnostics
        else {
            unreachable!()
        };
        println!(
            "N = {live_points:>4}: {:.4} (exact {exact:.4}) after {iterations} iterations, {stalled_levels} stalled moves",
            est.log_value()
        );
    }
    Ok(())
}
