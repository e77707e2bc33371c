//! Annealed importance sampling from the prior (t = 0) to the posterior (t = 1).
//!
//! Each sample starts as a prior draw and is carried up the ladder by
//! kernels invariant for `π(θ) π(y|θ)^t`. Its log-weight is
//! `Σ_j (t_j − t_{j−1}) log π(y|θ_{j−1})`, the log of the product of
//! tempered-density ratios with the prior terms cancelled.

use super::estimate::{Diagnostics, EvidenceEstimate, Method};
use super::ladder::TemperatureLadder;
use crate::error::{EvidenceError, Result};
use crate::math::{log_mean_exp, RngStream};
use crate::models::Model;
use crate::samplers::{StepStats, TemperedKernel};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AisConfig {
    pub ladder: TemperatureLadder,
    pub samples: usize,
    pub sweeps: usize,
}

impl Default for AisConfig {
    fn default() -> Self {
        AisConfig {
            ladder: TemperatureLadder::default(),
            samples: 1000,
            sweeps: 5,
        }
    }
}

/// Per-sample log-weights plus kernel statistics per rung.
pub struct AisRun {
    pub log_weights: Vec<f64>,
    pub rung_stats: Vec<StepStats>,
}

pub fn ais_log_weights<M, K>(
    model: &M,
    kernel: &K,
    config: &AisConfig,
    rng: &mut RngStream,
) -> Result<AisRun>
where
    M: Model + ?Sized,
    K: TemperedKernel + ?Sized,
{
    if config.samples == 0 || config.sweeps == 0 {
        return Err(EvidenceError::InvalidArgument(
            "AIS needs at least one sample and one sweep".into(),
        ));
    }
    let t = config.ladder.values();
    let m = t.len() - 1;
    let mut rung_stats = vec![StepStats::default(); t.len()];
    let mut log_weights = Vec::with_capacity(config.samples);
    for i in 0..config.samples {
        let mut theta = model.sample_prior(rng);
        let mut lw = 0.0;
        for j in 1..=m {
            let inc = (t[j] - t[j - 1]) * model.log_likelihood(&theta);
            if !inc.is_finite() {
                return Err(EvidenceError::NonFiniteWeight {
                    replicate: i,
                    temperature: t[j - 1],
                });
            }
            lw += inc;
            if j < m {
                for _ in 0..config.sweeps {
                    rung_stats[j].merge(kernel.transition(&mut theta, t[j], rng)?);
                }
            }
        }
        log_weights.push(lw);
    }
    Ok(AisRun {
        log_weights,
        rung_stats,
    })
}

/// Variance of the weights rescaled to mean one, and the effective sample size.
pub fn weight_degeneracy(log_weights: &[f64]) -> Result<(f64, f64)> {
    let lme = log_mean_exp(log_weights)?;
    let w: Vec<f64> = log_weights.iter().map(|l| (l - lme).exp()).collect();
    let n = w.len() as f64;
    let sum_sq: f64 = w.iter().map(|v| v * v).sum();
    Ok((sum_sq / n - 1.0, n * n / sum_sq))
}

pub fn ais<M, K>(
    model: &M,
    kernel: &K,
    config: &AisConfig,
    rng: &mut RngStream,
) -> Result<EvidenceEstimate>
where
    M: Model + ?Sized,
    K: TemperedKernel + ?Sized,
{
    let run = ais_log_weights(model, kernel, config, rng)?;
    let (variance, ess) = weight_degeneracy(&run.log_weights)?;
    let acceptance = config
        .ladder
        .values()
        .iter()
        .zip(&run.rung_stats)
        .filter_map(|(t, s)| s.acceptance_rate().map(|a| (*t, a)))
        .collect();
    EvidenceEstimate::new(
        log_mean_exp(&run.log_weights)?,
        Method::Ais,
        Diagnostics::Ais {
            samples: config.samples,
            rungs: config.ladder.len(),
            normalized_weight_variance: variance,
            effective_sample_size: ess,
            acceptance,
        },
    )
    .map(|e| e.with_provenance(rng))
}
