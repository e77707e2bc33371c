//! Model abstraction plus the built-in models.
//!
//! A model is a log prior, a log likelihood and a prior sampler. Estimators
//! that need more ask for it through capability traits: [`Differentiable`]
//! for Laplace, [`TemperedGibbs`] for Gibbs-driven AIS and power posteriors,
//! [`ChibBlocks`] for Chib's ordinate, and [`AnalyticEvidence`] for ground
//! truth.

use crate::error::{EvidenceError, Result};
use crate::math::{RngStream, SmallMatrix};

pub mod design;
pub mod gaussian;
pub mod logistic;
pub mod normal_gamma;
pub mod regression;

pub use design::{standardize_covariates, Standardized};
pub use gaussian::GaussianMeanPrecisionModel;
pub use logistic::LogisticRegressionModel;
pub use normal_gamma::{NormalGammaModel, NormalGammaPosterior};
pub use regression::GaussianLinearRegressionModel;

pub trait Model: Send + Sync {
    fn dimension(&self) -> usize;

    /// Normalized log prior density; `-inf` outside the support.
    fn log_prior(&self, theta: &[f64]) -> f64;

    /// Log likelihood `log π(y|θ)`; `-inf` outside the support.
    fn log_likelihood(&self, theta: &[f64]) -> f64;

    fn sample_prior(&self, rng: &mut RngStream) -> Vec<f64>;

    /// Short human-readable parameter names, used in diagnostics.
    fn parameter_names(&self) -> Vec<String> {
        (0..self.dimension()).map(|i| format!("theta{i}")).collect()
    }
}

/// `l(θ) = log π(y|θ) + log π(θ)`, with dimension and NaN checks.
pub fn log_joint<M: Model + ?Sized>(model: &M, theta: &[f64]) -> Result<f64> {
    check_point(model, theta)?;
    let lp = model.log_prior(theta);
    if lp == f64::NEG_INFINITY {
        return Ok(lp);
    }
    let v = lp + model.log_likelihood(theta);
    if v.is_nan() {
        return Err(EvidenceError::NotANumber("log joint"));
    }
    Ok(v)
}

pub(crate) fn check_point<M: Model + ?Sized>(model: &M, theta: &[f64]) -> Result<()> {
    if theta.len() != model.dimension() {
        return Err(EvidenceError::DimensionMismatch {
            expected: model.dimension(),
            actual: theta.len(),
        });
    }
    if theta.iter().any(|v| v.is_nan()) {
        return Err(EvidenceError::NotANumber("parameter vector"));
    }
    Ok(())
}

/// Gradient and Hessian of `l(θ)`.
pub trait Differentiable: Model {
    fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>>;
    fn hessian(&self, theta: &[f64]) -> Result<SmallMatrix>;
}

/// Exact Gibbs kernels for the power posterior `π(θ) π(y|θ)^t`.
pub trait TemperedGibbs: Model {
    /// One full sweep leaving the power posterior at `t` invariant.
    fn tempered_gibbs_sweep(&self, state: &mut [f64], t: f64, rng: &mut RngStream) -> Result<()>;

    /// Untempered sweep; bitwise identical to the tempered sweep at `t = 1`.
    fn gibbs_sweep(&self, state: &mut [f64], rng: &mut RngStream) -> Result<()> {
        self.tempered_gibbs_sweep(state, 1.0, rng)
    }
}

pub trait AnalyticEvidence: Model {
    fn analytic_log_evidence(&self) -> Result<f64>;

    /// `log z(t) = log ∫ π(θ) π(y|θ)^t dθ`, when known in closed form.
    fn log_normalizer_at(&self, _t: f64) -> Option<f64> {
        None
    }
}

/// Block decomposition for Chib's ordinate `π(θ*|y) = Π_k π(θ*_k | θ*_{<k}, y)`.
///
/// Blocks are listed in ordinate order: block 0 is estimated from the full
/// Gibbs run, block `k` from a reduced run with blocks `< k` held fixed.
pub trait ChibBlocks: Model {
    fn blocks(&self) -> Vec<Vec<usize>>;

    /// Draws block `block` from its full conditional given the rest of `state`.
    fn sample_block(&self, block: usize, state: &mut [f64], rng: &mut RngStream) -> Result<()>;

    /// Log full-conditional density of `state`'s block value given the rest of `state`.
    fn log_full_conditional(&self, block: usize, state: &[f64]) -> f64;

    /// Mode of the full conditional of `block` given the rest of `state`.
    fn conditional_mode(&self, block: usize, state: &[f64]) -> Vec<f64>;
}

/// A built-in prior paired with a constant likelihood `c`. The evidence of
/// such a model is exactly `c`, which makes it a sharp test target.
pub struct ConstantLikelihood<'a, M: Model + ?Sized> {
    pub base: &'a M,
    pub log_likelihood: f64,
}

impl<M: Model + ?Sized> Model for ConstantLikelihood<'_, M> {
    fn dimension(&self) -> usize {
        self.base.dimension()
    }
    fn log_prior(&self, theta: &[f64]) -> f64 {
        self.base.log_prior(theta)
    }
    fn log_likelihood(&self, theta: &[f64]) -> f64 {
        if self.base.log_prior(theta) == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.log_likelihood
        }
    }
    fn sample_prior(&self, rng: &mut RngStream) -> Vec<f64> {
        self.base.sample_prior(rng)
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// Central finite-difference gradient of `l(θ)`.
    pub fn fd_gradient<M: Model>(model: &M, theta: &[f64], rel_step: f64) -> Vec<f64> {
        (0..theta.len())
            .map(|i| {
                let h = rel_step * theta[i].abs().max(1e-3);
                let mut up = theta.to_vec();
                let mut dn = theta.to_vec();
                up[i] += h;
                dn[i] -= h;
                (log_joint(model, &up).unwrap() - log_joint(model, &dn).unwrap()) / (2.0 * h)
            })
            .collect()
    }

    pub fn assert_gradient_matches<M: Differentiable>(model: &M, draws: usize, seed: u64) {
        let mut rng = RngStream::new(seed, 99);
        for _ in 0..draws {
            let theta = model.sample_prior(&mut rng);
            let g = model.gradient(&theta).unwrap();
            let fd = fd_gradient(model, &theta, 1e-5);
            let scale = g.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-8);
            for (a, b) in g.iter().zip(&fd) {
                assert!(
                    (a - b).abs() <= 1e-5 * scale.max(a.abs()),
                    "gradient {g:?} vs finite differences {fd:?} at {theta:?}"
                );
            }
        }
    }

    pub fn assert_hessian_matches<M: Differentiable>(model: &M, theta: &[f64]) {
        let h = model.hessian(theta).unwrap();
        let d = theta.len();
        for j in 0..d {
            let step = 1e-6 * theta[j].abs().max(1e-3);
            let mut up = theta.to_vec();
            let mut dn = theta.to_vec();
            up[j] += step;
            dn[j] -= step;
            let gu = model.gradient(&up).unwrap();
            let gd = model.gradient(&dn).unwrap();
            for i in 0..d {
                let fd = (gu[i] - gd[i]) / (2.0 * step);
                let scale = h[(i, j)].abs().max(1e-6);
                assert!(
                    (fd - h[(i, j)]).abs() <= 1e-4 * scale,
                    "hessian ({i},{j}): {} vs fd {fd}",
                    h[(i, j)]
                );
            }
        }
    }
}
