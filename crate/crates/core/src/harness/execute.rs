//! Runs one configured estimator on one benchmark model.

use super::benchmark::BenchModel;
use super::config::{EstimatorSettings, PosteriorSampleSettings};
use crate::error::{EvidenceError, Result};
use crate::estimators::{
    ais, chib, harmonic_mean, laplace, laplace_at_map, nested_sampling, power_posteriors,
    AisConfig, Diagnostics, EvidenceEstimate, Method, PowerPosteriorConfig, TemperatureLadder,
};
use crate::math::RngStream;
use crate::models::LogisticRegressionModel;
use crate::samplers::{
    run_chain, ChainConfig, ChainOutput, GibbsKernel, RandomWalkKernel, TemperedKernel,
    TemperedKernelConfig,
};

fn posterior_chain<K: TemperedKernel>(
    kernel: &K,
    init: Vec<f64>,
    chain: &ChainConfig,
    rng: &mut RngStream,
) -> Result<ChainOutput> {
    run_chain(|s, r| kernel.transition(s, 1.0, r), &init, chain, rng)
}

fn logistic_kernel<'a>(
    m: &'a LogisticRegressionModel,
    proposal_precision: f64,
    ladder: Option<&TemperatureLadder>,
) -> Result<RandomWalkKernel<'a, LogisticRegressionModel>> {
    let config = match ladder {
        Some(l) => {
            TemperedKernelConfig::for_ladder(m.tau_prior, proposal_precision, l.first_positive())?
        }
        None => TemperedKernelConfig::fixed(proposal_precision.sqrt().recip()),
    };
    Ok(RandomWalkKernel { model: m, config })
}

/// Posterior draws at `t = 1`: Gibbs sweeps where available, single-site
/// random-walk Metropolis otherwise. Starts from the prior mean.
pub fn posterior_sample(
    model: &BenchModel,
    settings: &PosteriorSampleSettings,
    rng: &mut RngStream,
) -> Result<ChainOutput> {
    let chain = settings.chain()?;
    let init = model.prior_mean();
    match model {
        BenchModel::Regression(m) => posterior_chain(&GibbsKernel(m), init, &chain, rng),
        BenchModel::NormalGamma(m) => posterior_chain(&GibbsKernel(m), init, &chain, rng),
        BenchModel::Logistic(m) => posterior_chain(
            &logistic_kernel(m, settings.proposal_precision, None)?,
            init,
            &chain,
            rng,
        ),
    }
}

pub fn run_estimator(
    model: &BenchModel,
    settings: &EstimatorSettings,
    rng: &mut RngStream,
) -> Result<EvidenceEstimate> {
    match settings {
        EstimatorSettings::Exact(_) => match model.analytic_log_evidence() {
            Some(v) => EvidenceEstimate::new(v?, Method::Exact, Diagnostics::None),
            None => Err(EvidenceError::MissingCapability("analytic evidence")),
        },
        EstimatorSettings::Laplace(cfg) => {
            let init = model.prior_mean();
            match model {
                BenchModel::Regression(m) => laplace(m, &init, cfg),
                BenchModel::NormalGamma(m) => laplace(m, &init, cfg),
                BenchModel::Logistic(m) => laplace(m, &init, cfg),
            }
        }
        EstimatorSettings::LaplaceMap(s) => {
            let out = posterior_sample(model, s, rng)?;
            match model {
                BenchModel::Regression(m) => laplace_at_map(m, &out.states),
                BenchModel::NormalGamma(m) => laplace_at_map(m, &out.states),
                BenchModel::Logistic(m) => laplace_at_map(m, &out.states),
            }
            .map(|e| e.with_provenance(rng))
        }
        EstimatorSettings::HarmonicMean(s) => {
            let out = posterior_sample(model, s, rng)?;
            let m = model.as_model();
            let lls: Vec<f64> = out.states.iter().map(|t| m.log_likelihood(t)).collect();
            harmonic_mean(&lls).map(|e| e.with_provenance(rng))
        }
        EstimatorSettings::Chib(cfg) => match model {
            BenchModel::Regression(m) => chib(m, cfg, None, rng),
            BenchModel::NormalGamma(m) => chib(m, cfg, None, rng),
            BenchModel::Logistic(_) => Err(EvidenceError::MissingCapability(
                "closed-form full conditionals",
            )),
        },
        EstimatorSettings::Ais(s) => {
            let config = AisConfig {
                ladder: s.ladder.build()?,
                samples: s.samples,
                sweeps: s.sweeps,
            };
            match model {
                BenchModel::Regression(m) => ais(m, &GibbsKernel(m), &config, rng),
                BenchModel::NormalGamma(m) => ais(m, &GibbsKernel(m), &config, rng),
                BenchModel::Logistic(m) => {
                    let k = logistic_kernel(m, s.proposal_precision, Some(&config.ladder))?;
                    ais(m, &k, &config, rng)
                }
            }
        }
        EstimatorSettings::NestedSampling(cfg) => nested_sampling(model.as_model(), cfg, rng),
        EstimatorSettings::PowerPosterior(s) => {
            let config = PowerPosteriorConfig {
                ladder: s.ladder.build()?,
                chain: ChainConfig::new(s.iterations, s.burn_in_fraction, s.thinning)?,
                warm_start: s.warm_start,
            };
            match model {
                BenchModel::Regression(m) => power_posteriors(m, &GibbsKernel(m), &config, rng),
                BenchModel::NormalGamma(m) => power_posteriors(m, &GibbsKernel(m), &config, rng),
                BenchModel::Logistic(m) => {
                    let k = logistic_kernel(m, s.proposal_precision, Some(&config.ladder))?;
                    power_posteriors(m, &k, &config, rng)
                }
            }
        }
    }
}
