//! Logistic regression with an independent Gaussian prior of precision
//! `τ_prior` on every coefficient, intercept included.

use super::{check_point, Differentiable, Model};
use crate::error::{EvidenceError, Result};
use crate::math::density::LN_2PI;
use crate::math::{RngStream, SmallMatrix, MAX_DIM};

#[derive(Debug, Clone)]
pub struct LogisticRegressionModel {
    n: usize,
    k: usize,
    /// Row-major `n × k` design, leading column of ones.
    x: Vec<f64>,
    y: Vec<f64>,
    pub tau_prior: f64,
    names: Vec<String>,
}

/// `log(1 + e^η)` without overflow.
fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

impl LogisticRegressionModel {
    pub fn new(design: Vec<Vec<f64>>, y: Vec<u8>, tau_prior: f64) -> Result<Self> {
        if !(tau_prior > 0.0) {
            return Err(EvidenceError::InvalidArgument(
                "prior precision must be positive".into(),
            ));
        }
        if design.len() != y.len() {
            return Err(EvidenceError::DimensionMismatch {
                expected: y.len(),
                actual: design.len(),
            });
        }
        if let Some(bad) = y.iter().find(|&&v| v > 1) {
            return Err(EvidenceError::InvalidArgument(format!(
                "response must be 0 or 1, got {bad}"
            )));
        }
        let k = design.first().map_or(1, Vec::len);
        if k == 0 || k > MAX_DIM {
            return Err(EvidenceError::InvalidArgument(format!(
                "unsupported number of coefficients {k}"
            )));
        }
        let mut x = Vec::with_capacity(design.len() * k);
        for row in &design {
            if row.len() != k {
                return Err(EvidenceError::DimensionMismatch {
                    expected: k,
                    actual: row.len(),
                });
            }
            x.extend_from_slice(row);
        }
        let names = std::iter::once("intercept".to_string())
            .chain((1..k).map(|j| format!("theta{j}")))
            .collect();
        Ok(LogisticRegressionModel {
            n: y.len(),
            k,
            x,
            y: y.into_iter().map(f64::from).collect(),
            tau_prior,
            names,
        })
    }

    pub fn with_names(mut self, covariates: &[&str]) -> Self {
        if covariates.len() + 1 == self.k {
            self.names = std::iter::once("intercept")
                .chain(covariates.iter().copied())
                .map(String::from)
                .collect();
        }
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.k..(i + 1) * self.k]
    }

    fn linear_predictor(&self, i: usize, theta: &[f64]) -> f64 {
        self.row(i).iter().zip(theta).map(|(a, b)| a * b).sum()
    }
}

impl Model for LogisticRegressionModel {
    fn dimension(&self) -> usize {
        self.k
    }

    fn log_prior(&self, theta: &[f64]) -> f64 {
        let ss: f64 = theta.iter().map(|v| v * v).sum();
        0.5 * self.k as f64 * (self.tau_prior.ln() - LN_2PI) - 0.5 * self.tau_prior * ss
    }

    fn log_likelihood(&self, theta: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| {
                let eta = self.linear_predictor(i, theta);
                self.y[i] * eta - softplus(eta)
            })
            .sum()
    }

    fn sample_prior(&self, rng: &mut RngStream) -> Vec<f64> {
        let sd = self.tau_prior.sqrt().recip();
        (0..self.k).map(|_| rng.normal(0.0, sd)).collect()
    }

    fn parameter_names(&self) -> Vec<String> {
        self.names.clone()
    }
}

impl Differentiable for LogisticRegressionModel {
    fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        check_point(self, theta)?;
        let mut g: Vec<f64> = theta.iter().map(|v| -self.tau_prior * v).collect();
        for i in 0..self.n {
            let r = self.y[i] - sigmoid(self.linear_predictor(i, theta));
            for (gj, xj) in g.iter_mut().zip(self.row(i)) {
                *gj += r * xj;
            }
        }
        Ok(g)
    }

    fn hessian(&self, theta: &[f64]) -> Result<SmallMatrix> {
        check_point(self, theta)?;
        let mut h = SmallMatrix::diag(&vec![-self.tau_prior; self.k]);
        for i in 0..self.n {
            let p = sigmoid(self.linear_predictor(i, theta));
            let w = p * (1.0 - p);
            let row = self.row(i);
            for a in 0..self.k {
                for b in 0..self.k {
                    h[(a, b)] -= w * row[a] * row[b];
                }
            }
        }
        Ok(h)
    }
}
