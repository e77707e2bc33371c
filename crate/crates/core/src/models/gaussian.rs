//! Normal sample with unknown mean and precision under independent priors
//! `μ ~ N(ξ, ν⁻¹)` and `τ ~ Ga(a₀/2, b₀/2)` (shape/rate). θ = (μ, τ).
//!
//! The first gradient component is `τ(Σyᵢ − nμ) − ν(μ − ξ)`; this is the
//! form consistent with the Hessian entry `−(nτ + ν)`.

use super::{check_point, ChibBlocks, Differentiable, Model, TemperedGibbs};
use crate::error::{EvidenceError, Result};
use crate::math::density::{gamma_ln_pdf, normal_ln_pdf_precision, LN_2PI};
use crate::math::{RngStream, SmallMatrix};

#[derive(Debug, Clone)]
pub struct GaussianMeanPrecisionModel {
    y: Vec<f64>,
    /// Prior mean of μ.
    pub xi: f64,
    /// Prior precision of μ.
    pub nu: f64,
    pub a0: f64,
    pub b0: f64,
    n: f64,
    sum: f64,
    mean: f64,
    centered_ss: f64,
}

impl GaussianMeanPrecisionModel {
    pub fn new(y: Vec<f64>, xi: f64, nu: f64, a0: f64, b0: f64) -> Result<Self> {
        if !(nu > 0.0 && a0 > 0.0 && b0 > 0.0) {
            return Err(EvidenceError::InvalidArgument(
                "nu, a0 and b0 must be positive".into(),
            ));
        }
        let n = y.len() as f64;
        let sum: f64 = y.iter().sum();
        let mean = if y.is_empty() { 0.0 } else { sum / n };
        let centered_ss = y.iter().map(|v| (v - mean) * (v - mean)).sum();
        Ok(GaussianMeanPrecisionModel {
            y,
            xi,
            nu,
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

    /// `Σ (yᵢ − μ)²`.
    pub fn sum_sq(&self, mu: f64) -> f64 {
        self.centered_ss + self.n * (self.mean - mu) * (self.mean - mu)
    }

    /// One Gibbs sweep: μ from its conditional given the incoming τ, then τ
    /// given the new μ.
    pub fn gibbs_step_gaussian(&self, state: &mut [f64], rng: &mut RngStream) -> Result<()> {
        self.gibbs_step_gaussian_tempered(state, 1.0, rng)
    }

    /// Gibbs sweep targeting `π(θ) π(y|θ)^t`: every data term is scaled by `t`.
    pub fn gibbs_step_gaussian_tempered(
        &self,
        state: &mut [f64],
        t: f64,
        rng: &mut RngStream,
    ) -> Result<()> {
        if !(0.0..=1.0).contains(&t) {
            return Err(EvidenceError::InvalidArgument(format!(
                "temperature {t} outside [0, 1]"
            )));
        }
        let tau = state[1];
        if !(tau > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        let prec = t * self.n * tau + self.nu;
        let mean = (t * tau * self.sum + self.nu * self.xi) / prec;
        let mu = rng.normal(mean, prec.sqrt().recip());
        let shape = (t * self.n + self.a0) / 2.0;
        let rate = 0.5 * (t * self.sum_sq(mu) + self.b0);
        state[0] = mu;
        state[1] = rng.gamma(shape, rate);
        Ok(())
    }

    /// Gradient and Hessian of `l(θ)` in one call.
    pub fn gaussian_gradient_hessian(&self, theta: &[f64]) -> Result<(Vec<f64>, SmallMatrix)> {
        Ok((self.gradient(theta)?, self.hessian(theta)?))
    }

    fn tau_power(&self) -> f64 {
        (self.n + self.a0) / 2.0 - 1.0
    }
}

impl Model for GaussianMeanPrecisionModel {
    fn dimension(&self) -> usize {
        2
    }

    fn log_prior(&self, theta: &[f64]) -> f64 {
        normal_ln_pdf_precision(theta[0], self.xi, self.nu)
            + gamma_ln_pdf(theta[1], self.a0 / 2.0, self.b0 / 2.0)
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
        let mu = rng.normal(self.xi, self.nu.sqrt().recip());
        let tau = rng.gamma(self.a0 / 2.0, self.b0 / 2.0);
        vec![mu, tau]
    }

    fn parameter_names(&self) -> Vec<String> {
        vec!["mu".into(), "tau".into()]
    }
}

impl Differentiable for GaussianMeanPrecisionModel {
    fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        check_point(self, theta)?;
        let (mu, tau) = (theta[0], theta[1]);
        if !(tau > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        Ok(vec![
            tau * (self.sum - self.n * mu) - self.nu * (mu - self.xi),
            self.tau_power() / tau - self.b0 / 2.0 - 0.5 * self.sum_sq(mu),
        ])
    }

    fn hessian(&self, theta: &[f64]) -> Result<SmallMatrix> {
        check_point(self, theta)?;
        let (mu, tau) = (theta[0], theta[1]);
        if !(tau > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        let off = self.sum - self.n * mu;
        Ok(SmallMatrix::from_rows(&[
            &[-(self.n * tau + self.nu), off],
            &[off, -self.tau_power() / (tau * tau)],
        ]))
    }
}

impl TemperedGibbs for GaussianMeanPrecisionModel {
    fn tempered_gibbs_sweep(&self, state: &mut [f64], t: f64, rng: &mut RngStream) -> Result<()> {
        self.gibbs_step_gaussian_tempered(state, t, rng)
    }
}

/// Ordinate order (τ, μ): `π(τ*|y)` by Rao-Blackwellization over μ draws,
/// then the exact normal conditional `π(μ*|τ*, y)`.
impl ChibBlocks for GaussianMeanPrecisionModel {
    fn blocks(&self) -> Vec<Vec<usize>> {
        vec![vec![1], vec![0]]
    }

    fn sample_block(&self, block: usize, state: &mut [f64], rng: &mut RngStream) -> Result<()> {
        match block {
            0 => {
                let shape = (self.n + self.a0) / 2.0;
                let rate = 0.5 * (self.sum_sq(state[0]) + self.b0);
                state[1] = rng.gamma(shape, rate);
            }
            _ => {
                let tau = state[1];
                let prec = self.n * tau + self.nu;
                let mean = (tau * self.sum + self.nu * self.xi) / prec;
                state[0] = rng.normal(mean, prec.sqrt().recip());
            }
        }
        Ok(())
    }

    fn log_full_conditional(&self, block: usize, state: &[f64]) -> f64 {
        match block {
            0 => gamma_ln_pdf(
                state[1],
                (self.n + self.a0) / 2.0,
                0.5 * (self.sum_sq(state[0]) + self.b0),
            ),
            _ => {
                let tau = state[1];
                let prec = self.n * tau + self.nu;
                let mean = (tau * self.sum + self.nu * self.xi) / prec;
                normal_ln_pdf_precision(state[0], mean, prec)
            }
        }
    }

    fn conditional_mode(&self, block: usize, state: &[f64]) -> Vec<f64> {
        match block {
            0 => {
                let shape = (self.n + self.a0) / 2.0;
                let rate = 0.5 * (self.sum_sq(state[0]) + self.b0);
                vec![((shape - 1.0) / rate).max(f64::MIN_POSITIVE)]
            }
            _ => {
                let tau = state[1];
                vec![(tau * self.sum + self.nu * self.xi) / (self.n * tau + self.nu)]
            }
        }
    }
}
