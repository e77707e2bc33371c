//! Chib's estimator from Gibbs output.
//!
//! `log π(y) = log π(y|θ*) + log π(θ*) − log π̂(θ*|y)`, where the posterior
//! ordinate is assembled block by block. Block 0's ordinate is a
//! Rao-Blackwellized average over the full Gibbs run; each later block except
//! the last gets a reduced run with the earlier blocks fixed at their starred
//! values; the last block's ordinate is exact.

use super::estimate::{Diagnostics, EvidenceEstimate, Method};
use crate::error::{EvidenceError, Result};
use crate::math::{log_mean_exp, RngStream};
use crate::models::ChibBlocks;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChibConfig {
    pub burn_in: usize,
    pub iterations: usize,
    pub reduced_burn_in: usize,
    pub reduced_iterations: usize,
    /// Sampled block-0 values tried as `θ*₀`.
    pub candidates: usize,
    /// Draws used to score each candidate.
    pub scoring_draws: usize,
}

impl Default for ChibConfig {
    fn default() -> Self {
        ChibConfig {
            burn_in: 55_000,
            iterations: 150_000,
            reduced_burn_in: 5_000,
            reduced_iterations: 150_000,
            candidates: 64,
            scoring_draws: 5_000,
        }
    }
}

fn evenly_spaced<T>(v: &[T], k: usize) -> impl Iterator<Item = &T> {
    let k = k.clamp(1, v.len().max(1));
    let stride = (v.len() / k).max(1);
    v.iter().step_by(stride).take(k)
}

fn sweep<M: ChibBlocks + ?Sized>(
    model: &M,
    from_block: usize,
    n_blocks: usize,
    state: &mut [f64],
    rng: &mut RngStream,
) -> Result<()> {
    for b in from_block..n_blocks {
        model.sample_block(b, state, rng)?;
    }
    Ok(())
}

fn with_block(state: &[f64], idx: &[usize], source: &[f64]) -> Vec<f64> {
    let mut s = state.to_vec();
    for &i in idx {
        s[i] = source[i];
    }
    s
}

/// Rao-Blackwellized log ordinate of `block` at `star`, averaging over `draws`.
fn rb_ordinate<M: ChibBlocks + ?Sized>(
    model: &M,
    block: usize,
    idx: &[usize],
    star: &[f64],
    draws: impl Iterator<Item = impl AsRef<[f64]>>,
) -> Result<f64> {
    let vals: Vec<f64> = draws
        .map(|d| model.log_full_conditional(block, &with_block(d.as_ref(), idx, star)))
        .collect();
    log_mean_exp(&vals)
}

/// Runs Chib's estimator. With `star = None` the point is chosen as in the
/// running example: `θ*₀` maximizes the Rao-Blackwellized ordinate over a
/// set of sampled values, later blocks sit at their conditional modes.
pub fn chib<M: ChibBlocks + ?Sized>(
    model: &M,
    config: &ChibConfig,
    star: Option<&[f64]>,
    rng: &mut RngStream,
) -> Result<EvidenceEstimate> {
    if config.iterations == 0 || config.reduced_iterations == 0 {
        return Err(EvidenceError::InvalidArgument(
            "Chib runs need at least one iteration".into(),
        ));
    }
    let blocks = model.blocks();
    let k = blocks.len();
    let d = model.dimension();

    let mut state = model.sample_prior(rng);
    for _ in 0..config.burn_in {
        sweep(model, 0, k, &mut state, rng)?;
    }
    let mut draws = Vec::with_capacity(config.iterations);
    for _ in 0..config.iterations {
        sweep(model, 0, k, &mut state, rng)?;
        draws.push(state.clone());
    }

    let star = match star {
        Some(s) if s.len() == d => s.to_vec(),
        Some(s) => {
            return Err(EvidenceError::DimensionMismatch {
                expected: d,
                actual: s.len(),
            })
        }
        None => choose_star(model, &blocks, &draws, config)?,
    };

    let mut log_ordinates = Vec::with_capacity(k);
    log_ordinates.push(rb_ordinate(model, 0, &blocks[0], &star, draws.iter())?);
    drop(draws);

    for b in 1..k {
        if b + 1 == k {
            log_ordinates.push(model.log_full_conditional(b, &star));
            break;
        }
        let mut s = state.clone();
        for fixed in &blocks[..b] {
            for &i in fixed {
                s[i] = star[i];
            }
        }
        for _ in 0..config.reduced_burn_in {
            sweep(model, b, k, &mut s, rng)?;
        }
        let mut vals = Vec::with_capacity(config.reduced_iterations);
        for _ in 0..config.reduced_iterations {
            sweep(model, b, k, &mut s, rng)?;
            vals.push(model.log_full_conditional(b, &with_block(&s, &blocks[b], &star)));
        }
        log_ordinates.push(log_mean_exp(&vals)?);
    }

    let ordinate: f64 = log_ordinates.iter().sum();
    if !ordinate.is_finite() {
        return Err(EvidenceError::DegenerateOrdinate);
    }
    let log_likelihood = model.log_likelihood(&star);
    let log_prior = model.log_prior(&star);
    EvidenceEstimate::new(
        log_likelihood + log_prior - ordinate,
        Method::Chib,
        Diagnostics::Chib {
            star,
            log_likelihood,
            log_prior,
            log_ordinates,
        },
    )
    .map(|e| e.with_provenance(rng))
}

fn choose_star<M: ChibBlocks + ?Sized>(
    model: &M,
    blocks: &[Vec<usize>],
    draws: &[Vec<f64>],
    config: &ChibConfig,
) -> Result<Vec<f64>> {
    let scoring: Vec<&Vec<f64>> = evenly_spaced(draws, config.scoring_draws).collect();
    let mut best: Option<(f64, &Vec<f64>)> = None;
    for cand in evenly_spaced(draws, config.candidates) {
        let score = rb_ordinate(model, 0, &blocks[0], cand, scoring.iter())?;
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, cand));
        }
    }
    let (_, cand) = best.ok_or(EvidenceError::EmptySequence)?;

    let n = draws.len() as f64;
    let mut star = vec![0.0; model.dimension()];
    for s in draws {
        for (a, b) in star.iter_mut().zip(s) {
            *a += b / n;
        }
    }
    for &i in &blocks[0] {
        star[i] = cand[i];
    }
    for (b, idx) in blocks.iter().enumerate().skip(1) {
        let mode = model.conditional_mode(b, &star);
        for (&i, v) in idx.iter().zip(mode) {
            star[i] = v;
        }
    }
    Ok(star)
}
