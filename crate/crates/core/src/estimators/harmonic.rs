use super::estimate::{Diagnostics, EvidenceEstimate, Method};
use crate::error::{EvidenceError, Result};
use crate::math::log_sum_exp;

/// `log N − log Σ exp(−log π(y|θ⁽ⁱ⁾))` over posterior draws.
pub fn harmonic_mean(log_likelihoods: &[f64]) -> Result<EvidenceEstimate> {
    if log_likelihoods.is_empty() {
        return Err(EvidenceError::EmptySequence);
    }
    if let Some(i) = log_likelihoods.iter().position(|v| !v.is_finite()) {
        return Err(EvidenceError::NonFiniteLikelihood(i));
    }
    let neg: Vec<f64> = log_likelihoods.iter().map(|v| -v).collect();
    let n = log_likelihoods.len();
    EvidenceEstimate::new(
        (n as f64).ln() - log_sum_exp(&neg)?,
        Method::HarmonicMean,
        Diagnostics::HarmonicMean { draws: n },
    )
}
