//! Conjugate normal-gamma model: `yᵢ ~ N(μ, τ⁻¹)`, `μ | τ ~ N(μ₀, (τ₀τ)⁻¹)`,
//! `τ ~ Ga(a₀, b₀)` (shape/rate). θ = (μ, τ).
//!
//! The joint posterior is normal-gamma with parameters `(μₙ, τₙ, aₙ, bₙ)`:
//! `τ | y ~ Ga(aₙ, bₙ)` and `μ | τ, y ~ N(μₙ, (τₙτ)⁻¹)`. The Gibbs kernel
//! uses the exact full conditionals, whose τ-conditional carries the extra
//! `½` shape and `½τ₀(μ − μ₀)²` rate contributed by the μ prior.

use super::{check_point, AnalyticEvidence, ChibBlocks, Differentiable, Model, TemperedGibbs};
use crate::error::{EvidenceError, Result};
use crate::math::density::{gamma_ln_pdf, ln_gamma, normal_ln_pdf_precision, LN_2PI};
use crate::math::{RngStream, SmallMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct NormalGammaModel {
    y: Vec<f64>,
    pub mu0: f64,
    /// Relative prior precision of μ.
    pub tau0: f64,
    pub a0: f64,
    pub b0: f64,
    n: f64,
    sum: f64,
    mean: f64,
    centered_ss: f64,
}

/// Posterior normal-gamma parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalGammaPosterior {
    pub mu_n: f64,
    pub tau_n: f64,
    pub a_n: f64,
    pub b_n: f64,
}

impl NormalGammaModel {
    pub fn new(y: Vec<f64>, mu0: f64, tau0: f64, a0: f64, b0: f64) -> Result<Self> {
        if !(tau0 > 0.0 && a0 > 0.0 && b0 > 0.0) {
            return Err(EvidenceError::InvalidArgument(
                "tau0, a0 and b0 must be positive".into(),
            ));
        }
        let n = y.len() as f64;
        let sum: f64 = y.iter().sum();
        let mean = if y.is_empty() { 0.0 } else { sum / n };
        let centered_ss = y.iter().map(|v| (v - mean) * (v - mean)).sum();
        Ok(NormalGammaModel {
            y,
            mu0,
            tau0,
            a0,
            b0,
            n,
            sum,
            mean,
            centered_ss,
        })
    }

    pub fn data(&self) -> &[f64] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn sum_sq(&self, mu: f64) -> f64 {
        self.centered_ss + self.n * (self.mean - mu) * (self.mean - mu)
    }

    pub fn posterior(&self) -> NormalGammaPosterior {
        self.posterior_at(1.0)
    }

    /// Normal-gamma parameters of the power posterior `π(θ) π(y|θ)^t`.
    pub fn posterior_at(&self, t: f64) -> NormalGammaPosterior {
        let tn = t * self.n;
        let tau_n = self.tau0 + tn;
        let mu_n = (self.tau0 * self.mu0 + t * self.sum) / tau_n;
        let a_n = self.a0 + tn / 2.0;
        let b_n = self.b0
            + 0.5 * t * self.centered_ss
            + self.tau0 * tn * (self.mean - self.mu0).powi(2) / (2.0 * tau_n);
        NormalGammaPosterior {
            mu_n,
            tau_n,
            a_n,
            b_n,
        }
    }

    /// Exact joint posterior draw.
    pub fn sample_posterior(&self, rng: &mut RngStream) -> Vec<f64> {
        let p = self.posterior();
        let tau = rng.gamma(p.a_n, p.b_n);
        let mu = rng.normal(p.mu_n, (p.tau_n * tau).sqrt().recip());
        vec![mu, tau]
    }

    fn mu_conditional(&self, tau: f64, t: f64) -> (f64, f64) {
        let rel = self.tau0 + t * self.n;
        ((self.tau0 * self.mu0 + t * self.sum) / rel, tau * rel)
    }

    fn tau_conditional(&self, mu: f64, t: f64) -> (f64, f64) {
        let shape = self.a0 + (t * self.n + 1.0) / 2.0;
        let rate = self.b0
            + 0.5 * t * self.sum_sq(mu)
            + 0.5 * self.tau0 * (mu - self.mu0) * (mu - self.mu0);
        (shape, rate)
    }

    fn tau_power(&self) -> f64 {
        self.a0 - 0.5 + self.n / 2.0
    }
}

impl Model for NormalGammaModel {
    fn dimension(&self) -> usize {
        2
    }

    fn log_prior(&self, theta: &[f64]) -> f64 {
        let (mu, tau) = (theta[0], theta[1]);
        if tau <= 0.0 {
            return f64::NEG_INFINITY;
        }
        gamma_ln_pdf(tau, self.a0, self.b0) + normal_ln_pdf_precision(mu, self.mu0, self.tau0 * tau)
    }

    fn log_likelihood(&self, theta: &[f64]) -> f64 {
        let (mu, tau) = (theta[0], theta[1]);
        if tau <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if self.n == 0.0 {
            return 0.0;
        }
        0.5 * self.n * (tau.ln() - LN_2PI) - 0.5 * tau * self.sum_sq(mu)
    }

    fn sample_prior(&self, rng: &mut RngStream) -> Vec<f64> {
        let tau = rng.gamma(self.a0, self.b0);
        let mu = rng.normal(self.mu0, (self.tau0 * tau).sqrt().recip());
        vec![mu, tau]
    }

    fn parameter_names(&self) -> Vec<String> {
        vec!["mu".into(), "tau".into()]
    }
}

impl AnalyticEvidence for NormalGammaModel {
    /// `log[Γ(aₙ)/Γ(a₀) · b₀^{a₀}/bₙ^{aₙ} · (τ₀/τₙ)^{1/2} · (2π)^{−n/2}]`.
    fn analytic_log_evidence(&self) -> Result<f64> {
        Ok(self.log_normalizer_at(1.0).expect("closed form"))
    }

    fn log_normalizer_at(&self, t: f64) -> Option<f64> {
        let p = self.posterior_at(t);
        Some(
            ln_gamma(p.a_n) - ln_gamma(self.a0) + self.a0 * self.b0.ln() - p.a_n * p.b_n.ln()
                + 0.5 * (self.tau0 / p.tau_n).ln()
                - 0.5 * t * self.n * LN_2PI,
        )
    }
}

impl Differentiable for NormalGammaModel {
    fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        check_point(self, theta)?;
        let (mu, tau) = (theta[0], theta[1]);
        if !(tau > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        let dmu = -self.tau0 * (mu - self.mu0) + (self.sum - self.n * mu);
        let g = self.b0 + 0.5 * self.tau0 * (mu - self.mu0).powi(2) + 0.5 * self.sum_sq(mu);
        Ok(vec![tau * dmu, self.tau_power() / tau - g])
    }

    fn hessian(&self, theta: &[f64]) -> Result<SmallMatrix> {
        check_point(self, theta)?;
        let (mu, tau) = (theta[0], theta[1]);
        if !(tau > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        let off = -self.tau0 * (mu - self.mu0) + (self.sum - self.n * mu);
        Ok(SmallMatrix::from_rows(&[
            &[-tau * (self.tau0 + self.n), off],
            &[off, -self.tau_power() / (tau * tau)],
        ]))
    }
}

impl TemperedGibbs for NormalGammaModel {
    fn tempered_gibbs_sweep(&self, state: &mut [f64], t: f64, rng: &mut RngStream) -> Result<()> {
        if !(0.0..=1.0).contains(&t) {
            return Err(EvidenceError::InvalidArgument(format!(
                "temperature {t} outside [0, 1]"
            )));
        }
        if !(state[1] > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        let (mean, prec) = self.mu_conditional(state[1], t);
        state[0] = rng.normal(mean, prec.sqrt().recip());
        let (shape, rate) = self.tau_conditional(state[0], t);
        state[1] = rng.gamma(shape, rate);
        Ok(())
    }
}

impl ChibBlocks for NormalGammaModel {
    fn blocks(&self) -> Vec<Vec<usize>> {
        vec![vec![1], vec![0]]
    }

    fn sample_block(&self, block: usize, state: &mut [f64], rng: &mut RngStream) -> Result<()> {
        if block == 0 {
            let (shape, rate) = self.tau_conditional(state[0], 1.0);
            state[1] = rng.gamma(shape, rate);
        } else {
            let (mean, prec) = self.mu_conditional(state[1], 1.0);
            state[0] = rng.normal(mean, prec.sqrt().recip());
        }
        Ok(())
    }

    fn log_full_conditional(&self, block: usize, state: &[f64]) -> f64 {
        if block == 0 {
            let (shape, rate) = self.tau_conditional(state[0], 1.0);
            gamma_ln_pdf(state[1], shape, rate)
        } else {
            let (mean, prec) = self.mu_conditional(state[1], 1.0);
            normal_ln_pdf_precision(state[0], mean, prec)
        }
    }

    fn conditional_mode(&self, block: usize, state: &[f64]) -> Vec<f64> {
        if block == 0 {
            let (shape, rate) = self.tau_conditional(state[0], 1.0);
            vec![(shape - 1.0).max(0.0) / rate]
        } else {
            vec![self.mu_conditional(state[1], 1.0).0]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::RunningMoments;
    use crate::models::log_joint;
    use crate::models::testutil::{assert_gradient_matches, assert_hessian_matches};
    use proptest::prelude::*;

    #[test]
    fn single_observation_log_joint_by_hand() {
        let m = NormalGammaModel::new(vec![0.0], 0.0, 1.0, 2.0, 2.0).unwrap();
        let v = log_joint(&m, &[0.0, 1.0]).unwrap();
        // N(0|0,1) likelihood, N(0|0,1) prior on μ, Ga(1|2,2) = 4 e^{-2}
        let normal = -0.5 * (2.0 * std::f64::consts::PI).ln();
        let gamma = 4f64.ln() - 2.0;
        assert!((v - (2.0 * normal + gamma)).abs() < 1e-14);
    }

    #[test]
    fn empty_data_evidence_is_zero() {
        let m = NormalGammaModel::new(vec![], 0.3, 2.0, 1.5, 0.7).unwrap();
        assert!(m.analytic_log_evidence().unwrap().abs() < 1e-14);
    }

    #[test]
    fn tempered_normalizer_endpoints() {
        let m = NormalGammaModel::new(vec![0.5, -1.0, 2.0], 0.0, 1.0, 2.0, 2.0).unwrap();
        assert!(m.log_normalizer_at(0.0).unwrap().abs() < 1e-14);
        assert_eq!(
            m.log_normalizer_at(1.0).unwrap(),
            m.analytic_log_evidence().unwrap()
        );
    }

    #[test]
    fn gradient_and_hessian_match_finite_differences() {
        let mut rng = RngStream::new(1, 1);
        let y = (0..20).map(|_| rng.normal(0.5, 1.0)).collect();
        let m = NormalGammaModel::new(y, 0.0, 1.0, 2.0, 2.0).unwrap();
        assert_gradient_matches(&m, 100, 17);
        assert_hessian_matches(&m, &[0.4, 0.9]);
    }

    #[test]
    fn gibbs_sweep_preserves_exact_posterior() {
        // 10⁴ independent chains started at exact posterior draws, one sweep each.
        let mut rng = RngStream::new(77, 0);
        let y: Vec<f64> = (0..25).map(|_| rng.normal(1.0, 2.0)).collect();
        let m = NormalGammaModel::new(y, 0.0, 0.5, 2.0, 3.0).unwrap();
        let p = m.posterior();
        let (mut mu, mut tau) = (RunningMoments::new(), RunningMoments::new());
        for _ in 0..10_000 {
            let mut s = m.sample_posterior(&mut rng);
            m.gibbs_sweep(&mut s, &mut rng).unwrap();
            mu.push(s[0]);
            tau.push(s[1]);
        }
        let e_tau = p.a_n / p.b_n;
        let sd_tau = (p.a_n).sqrt() / p.b_n;
        let sd_mu = (p.b_n / (p.tau_n * (p.a_n - 1.0))).sqrt();
        assert!((tau.mean().unwrap() - e_tau).abs() < 5.0 * sd_tau / 100.0);
        assert!((mu.mean().unwrap() - p.mu_n).abs() < 5.0 * sd_mu / 100.0);
        assert!((tau.std_dev().unwrap() / sd_tau - 1.0).abs() < 0.05);
        assert!((mu.std_dev().unwrap() / sd_mu - 1.0).abs() < 0.05);
    }

    proptest! {
        #[test]
        fn posterior_parameters_follow_update_formulas(
            y in prop::collection::vec(-10.0f64..10.0, 0..30),
            mu0 in -5.0f64..5.0, tau0 in 0.01f64..10.0, a0 in 0.1f64..5.0, b0 in 0.1f64..5.0,
        ) {
            let m = NormalGammaModel::new(y.clone(), mu0, tau0, a0, b0).unwrap();
            let p = m.posterior();
            let n = y.len() as f64;
            let ybar = if y.is_empty() { 0.0 } else { y.iter().sum::<f64>() / n };
            let ss: f64 = y.iter().map(|v| (v - ybar).powi(2)).sum();
            prop_assert_eq!(p.tau_n, tau0 + n);
            prop_assert_eq!(p.a_n, a0 + n / 2.0);
            prop_assert!((p.mu_n - (tau0 * mu0 + n * ybar) / (tau0 + n)).abs() < 1e-12);
            let b_n = b0 + 0.5 * ss + tau0 * n * (ybar - mu0).powi(2) / (2.0 * (tau0 + n));
            prop_assert!((p.b_n - b_n).abs() <= 1e-10 * b_n);
        }
    }
}
