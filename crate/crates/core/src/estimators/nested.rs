//! Nested sampling with deterministic shrinkage `X_i = exp(−i/N)`.

use super::estimate::{Diagnostics, EvidenceEstimate, Method};
use crate::error::{EvidenceError, Result};
use crate::math::{log_add_exp, log_mean_exp, RngStream};
use crate::models::Model;
use serde::{Deserialize, Serialize};

/// How a discarded live point is replaced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstrainedMove {
    /// Clone a surviving live point and apply Metropolis moves restricted to
    /// the current likelihood level.
    Metropolis { moves: usize },
    /// Draw from the prior until the likelihood clears the level.
    PriorRejection { max_attempts: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NestedConfig {
    pub live_points: usize,
    /// Stop once a new contribution falls below `epsilon` times the running total.
    pub epsilon: f64,
    pub constrained_move: ConstrainedMove,
    pub max_iterations: usize,
}

impl Default for NestedConfig {
    fn default() -> Self {
        NestedConfig {
            live_points: 1000,
            epsilon: 1e-8,
            constrained_move: ConstrainedMove::Metropolis { moves: 20 },
            max_iterations: 10_000_000,
        }
    }
}

/// Live set plus the running sum, exposed for inspection.
#[derive(Debug, Clone)]
pub struct NestedState {
    pub live: Vec<Vec<f64>>,
    pub log_likelihoods: Vec<f64>,
    pub live_points: usize,
    pub iteration: usize,
    pub log_evidence: f64,
    pub levels: Vec<f64>,
}

impl NestedState {
    /// `log X_i = −i/N`.
    pub fn log_prior_mass(&self) -> f64 {
        -(self.iteration as f64) / self.live_points as f64
    }
}

fn coordinate_sds(live: &[Vec<f64>], skip: usize) -> Vec<f64> {
    let d = live[0].len();
    let n = (live.len() - 1) as f64;
    let mut mean = vec![0.0; d];
    for (i, p) in live.iter().enumerate() {
        if i != skip {
            for (m, v) in mean.iter_mut().zip(p) {
                *m += v / n;
            }
        }
    }
    let mut var = vec![0.0; d];
    for (i, p) in live.iter().enumerate() {
        if i != skip {
            for k in 0..d {
                var[k] += (p[k] - mean[k]).powi(2);
            }
        }
    }
    var.iter()
        .map(|v| (v / (n - 1.0).max(1.0)).sqrt())
        .collect()
}

/// Returns the replacement point, its log-likelihood, and whether it moved.
fn replace<M: Model + ?Sized>(
    model: &M,
    state: &NestedState,
    dead: usize,
    level: f64,
    mv: ConstrainedMove,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, f64, bool)> {
    let n = state.live.len();
    match mv {
        ConstrainedMove::Metropolis { moves } => {
            let mut pick = rng.index(n - 1);
            if pick >= dead {
                pick += 1;
            }
            let mut theta = state.live[pick].clone();
            let mut ll = state.log_likelihoods[pick];
            let mut lp = model.log_prior(&theta);
            let sds = coordinate_sds(&state.live, dead);
            let mut moved = false;
            let mut prop = theta.clone();
            for _ in 0..moves {
                for k in 0..theta.len() {
                    prop[k] = theta[k] + sds[k] * rng.standard_normal();
                }
                let lp_new = model.log_prior(&prop);
                if lp_new == f64::NEG_INFINITY || rng.uniform().ln() >= lp_new - lp {
                    continue;
                }
                let ll_new = model.log_likelihood(&prop);
                if ll_new.is_nan() {
                    return Err(EvidenceError::NotANumber("log likelihood"));
                }
                if ll_new < level {
                    continue;
                }
                theta.copy_from_slice(&prop);
                ll = ll_new;
                lp = lp_new;
                moved = true;
            }
            Ok((theta, ll, moved))
        }
        ConstrainedMove::PriorRejection { max_attempts } => {
            for _ in 0..max_attempts {
                let theta = model.sample_prior(rng);
                let ll = model.log_likelihood(&theta);
                if ll >= level {
                    return Ok((theta, ll, true));
                }
            }
            let keep = if dead == 0 { 1 } else { 0 };
            Ok((state.live[keep].clone(), state.log_likelihoods[keep], false))
        }
    }
}

pub fn nested_sampling<M: Model + ?Sized>(
    model: &M,
    config: &NestedConfig,
    rng: &mut RngStream,
) -> Result<EvidenceEstimate> {
    let n = config.live_points;
    if n < 2 {
        return Err(EvidenceError::InvalidArgument(
            "nested sampling needs at least two live points".into(),
        ));
    }
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(EvidenceError::InvalidArgument(format!(
            "termination epsilon {} outside (0, 1)",
            config.epsilon
        )));
    }
    let live: Vec<Vec<f64>> = (0..n).map(|_| model.sample_prior(rng)).collect();
    let log_likelihoods: Vec<f64> = live.iter().map(|t| model.log_likelihood(t)).collect();
    if let Some(i) = log_likelihoods.iter().position(|v| !v.is_finite()) {
        return Err(EvidenceError::NonFiniteLikelihood(i));
    }
    let mut state = NestedState {
        live,
        log_likelihoods,
        live_points: n,
        iteration: 0,
        log_evidence: -f64::MAX,
        levels: Vec::new(),
    };
    let nf = n as f64;
    // log(X_{i−1} − X_i) = −(i−1)/N + log(1 − e^{−1/N})
    let log_shell = (-(-1.0 / nf).exp_m1()).ln();
    let log_eps = config.epsilon.ln();
    let mut stalled = 0;
    let mut hit_cap = true;

    while state.iteration < config.max_iterations {
        let (dead, &level) = state
            .log_likelihoods
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("live set is non-empty");
        if let Some(&prev) = state.levels.last() {
            assert!(
                level >= prev,
                "likelihood levels decreased: {level} after {prev}"
            );
        }
        state.levels.push(level);
        let contribution = level + log_shell + state.log_prior_mass();
        let before = state.log_evidence;
        state.log_evidence = log_add_exp(before, contribution);
        state.iteration += 1;
        if contribution < log_eps + before {
            // the dead point is dropped without replacement
            state.live.swap_remove(dead);
            state.log_likelihoods.swap_remove(dead);
            hit_cap = false;
            break;
        }
        let (theta, ll, moved) = replace(model, &state, dead, level, config.constrained_move, rng)?;
        if !moved {
            stalled += 1;
        }
        state.live[dead] = theta;
        state.log_likelihoods[dead] = ll;
    }
    if stalled > 0 {
        log::info!("nested sampling: replacement failed to move at {stalled} levels");
    }

    let log_x = state.log_prior_mass();
    let end = log_mean_exp(&state.log_likelihoods)? + log_x;
    let total = log_add_exp(state.log_evidence, end);
    EvidenceEstimate::new(
        total,
        Method::NestedSampling,
        Diagnostics::NestedSampling {
            live_points: n,
            iterations: state.iteration,
            log_end_correction: end,
            final_log_prior_mass: log_x,
            stalled_levels: stalled,
            hit_iteration_cap: hit_cap,
        },
    )
    .map(|e| e.with_provenance(rng))
}
