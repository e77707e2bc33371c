use crate::error::{EvidenceError, Result};
use crate::math::RngStream;
use serde::{Deserialize, Serialize};

/// Proposal bookkeeping for one kernel application. Gibbs kernels report
/// zero proposals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub proposed: u64,
    pub accepted: u64,
}

impl StepStats {
    pub fn merge(&mut self, other: StepStats) {
        self.proposed += other.proposed;
        self.accepted += other.accepted;
    }

    pub fn acceptance_rate(&self) -> Option<f64> {
        (self.proposed > 0).then(|| self.accepted as f64 / self.proposed as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burn_in_fraction: f64,
    pub thinning: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            iterations: 5000,
            burn_in_fraction: 0.2,
            thinning: 1,
        }
    }
}

impl ChainConfig {
    pub fn new(iterations: usize, burn_in_fraction: f64, thinning: usize) -> Result<Self> {
        let c = ChainConfig {
            iterations,
            burn_in_fraction,
            thinning,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 || self.thinning == 0 {
            return Err(EvidenceError::InvalidArgument(
                "iterations and thinning must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.burn_in_fraction) {
            return Err(EvidenceError::InvalidArgument(format!(
                "burn-in fraction {} outside [0, 1)",
                self.burn_in_fraction
            )));
        }
        if self.burn_in() >= self.iterations {
            return Err(EvidenceError::InvalidArgument(
                "burn-in consumes every iteration".into(),
            ));
        }
        Ok(())
    }

    pub fn burn_in(&self) -> usize {
        (self.iterations as f64 * self.burn_in_fraction).floor() as usize
    }

    /// Number of states [`run_chain`] returns.
    pub fn kept(&self) -> usize {
        (self.iterations - self.burn_in()).div_ceil(self.thinning)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    pub states: Vec<Vec<f64>>,
    pub stats: StepStats,
}

impl ChainOutput {
    pub fn acceptance_rate(&self) -> Option<f64> {
        self.stats.acceptance_rate()
    }

    /// Coordinate-wise mean of the kept states.
    pub fn mean_state(&self) -> Vec<f64> {
        let d = self.states.first().map_or(0, Vec::len);
        let mut m = vec![0.0; d];
        for s in &self.states {
            for (a, b) in m.iter_mut().zip(s) {
                *a += b;
            }
        }
        let n = self.states.len().max(1) as f64;
        m.iter_mut().for_each(|v| *v /= n);
        m
    }
}

/// Applies `kernel` `config.iterations` times from `init`, drops the burn-in
/// and keeps every `thinning`-th remaining state.
pub fn run_chain<F>(
    mut kernel: F,
    init: &[f64],
    config: &ChainConfig,
    rng: &mut RngStream,
) -> Result<ChainOutput>
where
    F: FnMut(&mut [f64], &mut RngStream) -> Result<StepStats>,
{
    config.validate()?;
    let burn = config.burn_in();
    let mut state = init.to_vec();
    let mut states = Vec::with_capacity(config.kept());
    let mut stats = StepStats::default();
    for it in 0..config.iterations {
        stats.merge(kernel(&mut state, rng)?);
        if it >= burn && (it - burn) % config.thinning == 0 {
            states.push(state.clone());
        }
    }
    Ok(ChainOutput { states, stats })
}
