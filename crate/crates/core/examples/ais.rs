//! Annealed importance sampling with an exact tempered Gibbs kernel.
//!
//! cargo run --release --example ais

use model_evidence::estimators::{ais, AisConfig, Diagnostics, TemperatureLadder};
use model_evidence::harness::{BenchModel, NormalGammaDesign};
use model_evidence::math::RngStream;
use model_evidence::models::AnalyticEvidence;
use model_evidence::samplers::GibbsKernel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let models = NormalGammaDesign::seeded_instance().models()?;
    let BenchModel::NormalGamma(m) = &models[0].model else {
        unreachable!()
    };
    let exact = m.analytic_log_evidence()?;
    for steps in [10, 50, 200] {
        let config = AisConfig {
            ladder: TemperatureLadder::power(steps, 5.0)?,
            samples: 500,
            sweeps: 1,
        };
        let est = ais(
            m,
            &GibbsKernel(m),
            &config,
            &mut RngStream::new(3, steps as u64),
        )?;
        let Diagnostics::Ais {
            effective_sample_size,
            ..
        } = est.diagnostics
        else {
            unreachable!()
        };
        println!(
            "{steps:>4} temperatures: {:.5} (exact {exact:.5}), ESS {effective_sample_size:.0} of 500",
            est.log_value()
        );
    }
    Ok(())
}
