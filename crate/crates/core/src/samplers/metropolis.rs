use super::chain::StepStats;
use crate::error::{EvidenceError, Result};
use crate::math::RngStream;
use crate::models::{Model, TemperedGibbs};
use serde::{Deserialize, Serialize};

/// Proposal scaling for single-site random-walk Metropolis on a power
/// posterior. At temperature `t > 0` every coordinate is proposed with
/// standard deviation `(t^α τ_p)^{-1/2}`; at `t = 0` the prior scale
/// `τ_prior^{-1/2}` is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperedKernelConfig {
    pub proposal_precision: f64,
    pub exponent: f64,
    pub zero_temperature_sd: f64,
}

impl TemperedKernelConfig {
    /// Chooses `α` so that the proposal precision at the smallest positive
    /// temperature equals the prior precision.
    pub fn for_ladder(
        prior_precision: f64,
        proposal_precision: f64,
        smallest_positive_t: f64,
    ) -> Result<Self> {
        if !(prior_precision > 0.0 && proposal_precision > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        if !(smallest_positive_t > 0.0 && smallest_positive_t < 1.0) {
            return Err(EvidenceError::BadLadder(format!(
                "smallest positive temperature {smallest_positive_t} must lie in (0, 1)"
            )));
        }
        Ok(TemperedKernelConfig {
            proposal_precision,
            exponent: (prior_precision / proposal_precision).ln() / smallest_positive_t.ln(),
            zero_temperature_sd: prior_precision.sqrt().recip(),
        })
    }

    /// Fixed proposal sd at every temperature.
    pub fn fixed(sd: f64) -> Self {
        TemperedKernelConfig {
            proposal_precision: sd.powi(-2),
            exponent: 0.0,
            zero_temperature_sd: sd,
        }
    }

    pub fn proposal_sd(&self, t: f64) -> f64 {
        if t == 0.0 {
            self.zero_temperature_sd
        } else {
            (t.powf(self.exponent) * self.proposal_precision)
                .sqrt()
                .recip()
        }
    }
}

/// A Markov kernel leaving `π(θ) π(y|θ)^t` invariant.
pub trait TemperedKernel: Send + Sync {
    fn transition(&self, state: &mut [f64], t: f64, rng: &mut RngStream) -> Result<StepStats>;
}

/// `log π(θ) + t log π(y|θ)`, with `0 · (-inf)` read as 0.
pub fn tempered_log_target<M: Model + ?Sized>(model: &M, theta: &[f64], t: f64) -> f64 {
    let lp = model.log_prior(theta);
    if t == 0.0 || lp == f64::NEG_INFINITY {
        lp
    } else {
        lp + t * model.log_likelihood(theta)
    }
}

/// One systematic scan of single-site Gaussian random-walk updates.
/// `current` is `log_target(state)`; the updated value is returned.
pub fn single_site_metropolis<F>(
    log_target: F,
    state: &mut [f64],
    current: f64,
    sds: &[f64],
    rng: &mut RngStream,
) -> Result<(f64, StepStats)>
where
    F: Fn(&[f64]) -> f64,
{
    if !current.is_finite() {
        return Err(EvidenceError::OutsideSupport);
    }
    let mut value = current;
    let mut stats = StepStats::default();
    for i in 0..state.len() {
        let old = state[i];
        state[i] = old + sds[i] * rng.standard_normal();
        let proposed = log_target(state);
        if proposed.is_nan() {
            return Err(EvidenceError::NotANumber("proposal log target"));
        }
        stats.proposed += 1;
        if rng.uniform().ln() < proposed - value {
            value = proposed;
            stats.accepted += 1;
        } else {
            state[i] = old;
        }
    }
    Ok((value, stats))
}

/// Tempered single-site random-walk step for any [`Model`].
pub fn rw_metropolis_step<M: Model + ?Sized>(
    model: &M,
    state: &mut [f64],
    t: f64,
    config: &TemperedKernelConfig,
    rng: &mut RngStream,
) -> Result<StepStats> {
    let current = tempered_log_target(model, state, t);
    let sds = vec![config.proposal_sd(t); state.len()];
    single_site_metropolis(
        |th| tempered_log_target(model, th, t),
        state,
        current,
        &sds,
        rng,
    )
    .map(|(_, s)| s)
}

pub struct RandomWalkKernel<'a, M: Model + ?Sized> {
    pub model: &'a M,
    pub config: TemperedKernelConfig,
}

impl<M: Model + ?Sized> TemperedKernel for RandomWalkKernel<'_, M> {
    fn transition(&self, state: &mut [f64], t: f64, rng: &mut RngStream) -> Result<StepStats> {
        rw_metropolis_step(self.model, state, t, &self.config, rng)
    }
}

/// Exact tempered Gibbs sweep of a conjugate model.
pub struct GibbsKernel<'a, M: TemperedGibbs + ?Sized>(pub &'a M);

impl<M: TemperedGibbs + ?Sized> TemperedKernel for GibbsKernel<'_, M> {
    fn transition(&self, state: &mut [f64], t: f64, rng: &mut RngStream) -> Result<StepStats> {
        self.0.tempered_gibbs_sweep(state, t, rng)?;
        Ok(StepStats::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::RunningMoments;

    fn std_normal(x: &[f64]) -> f64 {
        -0.5 * x[0] * x[0]
    }

    #[test]
    fn one_dimensional_normal_variance() {
        let mut rng = RngStream::new(1, 1);
        let mut x = [0.0];
        let mut cur = std_normal(&x);
        let mut m = RunningMoments::default();
        for it in 0..200_000 {
            cur = single_site_metropolis(std_normal, &mut x, cur, &[2.4], &mut rng)
                .unwrap()
                .0;
            if it >= 1000 {
                m.push(x[0]);
            }
        }
        assert!(m.mean().unwrap().abs() < 0.03);
        assert!((m.variance().unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn exact_draws_stay_stationary() {
        // detailed balance implies the target is preserved by one step
        let mut rng = RngStream::new(2, 2);
        let mut before = RunningMoments::default();
        let mut after = RunningMoments::default();
        for _ in 0..100_000 {
            let mut x = [rng.standard_normal()];
            before.push(x[0] * x[0]);
            let cur = std_normal(&x);
            single_site_metropolis(std_normal, &mut x, cur, &[3.0], &mut rng).unwrap();
            after.push(x[0] * x[0]);
        }
        let se = (2.0f64 / 100_000.0).sqrt();
        assert!((after.mean().unwrap() - 1.0).abs() < 5.0 * se);
        assert!((before.mean().unwrap() - 1.0).abs() < 5.0 * se);
    }

    #[test]
    fn outside_support_is_an_error() {
        let mut rng = RngStream::new(0, 0);
        let mut x = [0.0];
        let err = single_site_metropolis(|_| 0.0, &mut x, f64::NEG_INFINITY, &[1.0], &mut rng)
            .unwrap_err();
        assert_eq!(err.to_string(), "chain initialized outside support");
    }

    #[test]
    fn proposal_scale_endpoints() {
        let c = TemperedKernelConfig::for_ladder(0.01, 2.0, 1e-10).unwrap();
        assert!((c.proposal_sd(0.0) - 10.0).abs() < 1e-12);
        assert!((c.proposal_sd(1e-10) - 10.0).abs() < 1e-8);
        assert!((c.proposal_sd(1.0) - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(TemperedKernelConfig::for_ladder(0.01, 2.0, 1.0).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let run = || {
            let mut rng = RngStream::new(9, 4);
            let mut x = [0.3];
            let mut cur = std_normal(&x);
            let mut trace = Vec::new();
            for _ in 0..100 {
                cur = single_site_metropolis(std_normal, &mut x, cur, &[1.0], &mut rng)
                    .unwrap()
                    .0;
                trace.push(x[0].to_bits());
            }
            trace
        };
        assert_eq!(run(), run());
    }
}
