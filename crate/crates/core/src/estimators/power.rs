//! Power posteriors: `log π(y) = ∫₀¹ E_{θ|y,t}[log π(y|θ)] dt`, with the
//! expectation estimated by MCMC at each rung and the integral by the
//! trapezoidal rule.

use super::estimate::{Diagnostics, EvidenceEstimate, Method, RungSummary};
use super::ladder::TemperatureLadder;
use crate::error::{EvidenceError, Result};
use crate::math::{RngStream, RunningMoments};
use crate::models::Model;
use crate::samplers::{run_chain, tempered_log_target, ChainConfig, TemperedKernel};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarmStart {
    /// Start the next rung at the average of the states sampled at this one.
    SampleMean,
    /// Start the next rung at the final state of this one.
    LastState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerPosteriorConfig {
    pub ladder: TemperatureLadder,
    pub chain: ChainConfig,
    pub warm_start: WarmStart,
}

impl Default for PowerPosteriorConfig {
    fn default() -> Self {
        PowerPosteriorConfig {
            ladder: TemperatureLadder::default(),
            chain: ChainConfig::default(),
            warm_start: WarmStart::SampleMean,
        }
    }
}

/// `Σ_j (t_j − t_{j−1}) (E_{j−1} + E_j) / 2`.
pub fn trapezoid(ts: &[f64], es: &[f64]) -> Result<f64> {
    if ts.len() != es.len() {
        return Err(EvidenceError::DimensionMismatch {
            expected: ts.len(),
            actual: es.len(),
        });
    }
    Ok(ts
        .windows(2)
        .zip(es.windows(2))
        .map(|(t, e)| (t[1] - t[0]) * 0.5 * (e[0] + e[1]))
        .sum())
}

pub fn power_posteriors<M, K>(
    model: &M,
    kernel: &K,
    config: &PowerPosteriorConfig,
    rng: &mut RngStream,
) -> Result<EvidenceEstimate>
where
    M: Model + ?Sized,
    K: TemperedKernel + ?Sized,
{
    config.chain.validate()?;
    let mut init = model.sample_prior(rng);
    let mut rungs = Vec::with_capacity(config.ladder.len());
    for &t in config.ladder.values() {
        let out = run_chain(
            |s: &mut [f64], r: &mut RngStream| kernel.transition(s, t, r),
            &init,
            &config.chain,
            rng,
        )?;
        let mut mom = RunningMoments::default();
        for (i, s) in out.states.iter().enumerate() {
            let ll = model.log_likelihood(s);
            if !ll.is_finite() {
                return Err(EvidenceError::NonFiniteLikelihood(i));
            }
            mom.push(ll);
        }
        rungs.push(RungSummary {
            t,
            mean_log_likelihood: mom.mean()?,
            standard_error: mom.std_error().unwrap_or(f64::NAN),
            acceptance_rate: out.acceptance_rate(),
        });
        let last = out.states.last().cloned().unwrap_or(init);
        init = match config.warm_start {
            WarmStart::SampleMean => {
                let mean = out.mean_state();
                if tempered_log_target(model, &mean, t).is_finite() {
                    mean
                } else {
                    last
                }
            }
            WarmStart::LastState => last,
        };
    }
    let ts: Vec<f64> = rungs.iter().map(|r| r.t).collect();
    let es: Vec<f64> = rungs.iter().map(|r| r.mean_log_likelihood).collect();
    EvidenceEstimate::new(
        trapezoid(&ts, &es)?,
        Method::PowerPosterior,
        Diagnostics::PowerPosterior { rungs },
    )
    .map(|e| e.with_provenance(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{AnalyticEvidence, ConstantLikelihood, NormalGammaModel};
    use crate::samplers::{GibbsKernel, RandomWalkKernel, TemperedKernelConfig};

    fn normal_gamma() -> NormalGammaModel {
        let mut rng = RngStream::new(2024, 0);
        let y = (0..100).map(|_| rng.normal(0.5, 1.5)).collect();
        NormalGammaModel::new(y, 0.0, 1.0, 2.0, 2.0).unwrap()
    }

    /// Pool-adjacent-violators fit of a non-decreasing sequence.
    fn isotonic(v: &[f64]) -> Vec<f64> {
        let mut blocks: Vec<(f64, usize)> = Vec::new();
        for &x in v {
            blocks.push((x, 1));
            while blocks.len() > 1 {
                let (b, nb) = blocks[blocks.len() - 1];
                let (a, na) = blocks[blocks.len() - 2];
                if a <= b {
                    break;
                }
                blocks.pop();
                let last = blocks.last_mut().unwrap();
                *last = ((a * na as f64 + b * nb as f64) / (na + nb) as f64, na + nb);
            }
        }
        blocks
            .into_iter()
            .flat_map(|(x, n)| std::iter::repeat_n(x, n))
            .collect()
    }

    fn short(steps: usize) -> PowerPosteriorConfig {
        PowerPosteriorConfig {
            ladder: TemperatureLadder::power(steps, 5.0).unwrap(),
            chain: ChainConfig::new(500, 0.2, 1).unwrap(),
            warm_start: WarmStart::SampleMean,
        }
    }

    #[test]
    fn constant_likelihood_is_exact() {
        let base = normal_gamma();
        let m = ConstantLikelihood {
            base: &base,
            log_likelihood: -12.25,
        };
        let k = RandomWalkKernel {
            model: &m,
            config: TemperedKernelConfig::fixed(0.3),
        };
        let e = power_posteriors(&m, &k, &short(20), &mut RngStream::new(0, 1)).unwrap();
        assert!((e.log_value() + 12.25).abs() < 1e-12);
    }

    #[test]
    fn close_to_analytic_and_monotone() {
        let m = normal_gamma();
        let e =
            power_posteriors(&m, &GibbsKernel(&m), &short(50), &mut RngStream::new(4, 4)).unwrap();
        assert!((e.log_value() - m.analytic_log_evidence().unwrap()).abs() < 0.5);
        let Diagnostics::PowerPosterior { rungs } = &e.diagnostics else {
            panic!()
        };
        let es: Vec<f64> = rungs.iter().map(|r| r.mean_log_likelihood).collect();
        for ((r, e), fit) in rungs.iter().zip(&es).zip(isotonic(&es)) {
            assert!(
                (e - fit).abs() <= 3.0 * r.standard_error + 1e-9,
                "t = {}",
                r.t
            );
        }
    }

    #[test]
    fn exact_expectations_show_discretization_shrinking() {
        // with E_j computed from the closed-form normalizer, only the rule's error remains
        let m = normal_gamma();
        let exact = m.analytic_log_evidence().unwrap();
        let h = 1e-6;
        let expected_ll = |t: f64| {
            let hi = (t + h).min(1.0);
            let lo = (t - h).max(0.0);
            (m.log_normalizer_at(hi).unwrap() - m.log_normalizer_at(lo).unwrap()) / (hi - lo)
        };
        let gap = |steps: usize| {
            let l = TemperatureLadder::power(steps, 5.0).unwrap();
            let es: Vec<f64> = l.values().iter().map(|&t| expected_ll(t)).collect();
            (trapezoid(l.values(), &es).unwrap() - exact).abs()
        };
        assert!(gap(20) < gap(10));
        assert!(gap(40) < gap(20));
    }

    #[test]
    fn trapezoid_by_hand() {
        assert_eq!(trapezoid(&[0.0, 0.5, 1.0], &[0.0, 1.0, 2.0]).unwrap(), 1.0);
        assert!(trapezoid(&[0.0, 1.0], &[1.0]).is_err());
    }

    #[test]
    fn isotonic_helper() {
        assert_eq!(isotonic(&[1.0, 3.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
    }
}
