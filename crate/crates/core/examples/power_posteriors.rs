//! Thermodynamic integration over a power-posterior ladder.
//!
//! cargo run --release --example power_posteriors

use model_evidence::estimators::{
    power_posteriors, Diagnostics, PowerPosteriorConfig, TemperatureLadder, WarmStart,
};
use model_evidence::harness::{BenchModel, NormalGammaDesign};
use model_evidence::math::RngStream;
use model_evidence::models::AnalyticEvidence;
use model_evidence::samplers::{ChainConfig, GibbsKernel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let models = NormalGammaDesign::seeded_instance().models()?;
    let BenchModel::NormalGamma(m) = &models[0].model else {
        unreachable!()
    };
    let config = PowerPosteriorConfig {
        ladder: TemperatureLadder::power(30, 5.0)?,
        chain: ChainConfig::new(2_000, 0.2, 1)?,
        warm_start: WarmStart::SampleMean,
    };
    let est = power_posteriors(m, &GibbsKernel(m), &config, &mut RngStream::new(11, 0))?;
    if let Diagnostics::PowerPosterior { rungs } = &est.diagnostics {
        for r in rungs.iter().step_by(5) {
            println!(
                "t = {:.2e}  E[log L] = {:>10.4} ± {:.4}",
                r.t, r.mean_log_likelihood, r.standard_error
            );
        }
    }
    println!(
        "log evidence {:.4}  exact {:.4}",
        est.log_value(),
        m.analytic_log_evidence()?
    );
    Ok(())
}
