//! Laplace approximation around a Newton-located mode, or around the best
//! point of a posterior sample.

use super::estimate::{Diagnostics, EvidenceEstimate, Method};
use crate::error::{EvidenceError, Result};
use crate::math::density::LN_2PI;
use crate::models::{log_joint, Differentiable};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NewtonConfig {
    /// `γ` in `θ ← θ − γ [D²l]⁻¹ ∇l`.
    pub step_size: f64,
    /// Stop when successive `l` values differ by less than this...
    pub tol: f64,
    /// ...and, if set, the gradient norm is below this.
    pub gradient_tol: Option<f64>,
    pub max_iter: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            step_size: 1.0,
            tol: 1e-8,
            gradient_tol: Some(1e-6),
            max_iter: 100,
        }
    }
}

impl NewtonConfig {
    /// Stops on `|Δl| < 1e-3` alone.
    pub fn loose() -> Self {
        NewtonConfig {
            tol: 1e-3,
            gradient_tol: None,
            ..Self::default()
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Newton ascent on `l(θ)` with step halving whenever a step would lower
/// `l` or leave the support. Returns the mode and the iteration count.
pub fn newton_mode<M: Differentiable + ?Sized>(
    model: &M,
    init: &[f64],
    config: &NewtonConfig,
) -> Result<(Vec<f64>, usize)> {
    let mut theta = init.to_vec();
    let mut l = log_joint(model, &theta)?;
    if !l.is_finite() {
        return Err(EvidenceError::OutsideSupport);
    }
    let mut g = model.gradient(&theta)?;
    for it in 1..=config.max_iter {
        let h = model.hessian(&theta)?;
        let dir = match h.scaled(-1.0).cholesky() {
            Ok(ch) => ch.solve(&g),
            // not locally concave: fall back to steepest ascent
            Err(_) => g.clone(),
        };
        let slack = 1e-12 * (1.0 + l.abs());
        let mut step = config.step_size;
        let mut moved = None;
        for _ in 0..60 {
            let cand: Vec<f64> = theta.iter().zip(&dir).map(|(t, d)| t + step * d).collect();
            let lc = log_joint(model, &cand)?;
            if lc.is_finite() && lc >= l - slack {
                moved = Some((cand, lc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, lc)) = moved else {
            return Err(EvidenceError::NoConvergence {
                iterations: it,
                gradient_norm: norm(&g),
            });
        };
        let delta = (lc - l).abs();
        theta = cand;
        l = lc;
        g = model.gradient(&theta)?;
        let grad_ok = config.gradient_tol.is_none_or(|gt| norm(&g) < gt);
        if delta < config.tol && grad_ok {
            return Ok((theta, it));
        }
    }
    Err(EvidenceError::NoConvergence {
        iterations: config.max_iter,
        gradient_norm: norm(&g),
    })
}

/// `(d/2) log 2π − ½ log|−D²l(θ)| + l(θ)` at a given point.
pub fn laplace_at<M: Differentiable + ?Sized>(
    model: &M,
    theta: &[f64],
    iterations: usize,
    method: Method,
) -> Result<EvidenceEstimate> {
    let l = log_joint(model, theta)?;
    let h = model.hessian(theta)?;
    let ch = h
        .scaled(-1.0)
        .cholesky()
        .map_err(|_| EvidenceError::SaddleOrRidge)?;
    let logdet = ch.logdet();
    let d = theta.len() as f64;
    let value = 0.5 * d * LN_2PI - 0.5 * logdet + l;
    EvidenceEstimate::new(
        value,
        method,
        Diagnostics::Laplace {
            iterations,
            gradient_norm: norm(&model.gradient(theta)?),
            mode: theta.to_vec(),
            log_det_neg_hessian: logdet,
        },
    )
}

pub fn laplace<M: Differentiable + ?Sized>(
    model: &M,
    init: &[f64],
    config: &NewtonConfig,
) -> Result<EvidenceEstimate> {
    let (mode, iterations) = newton_mode(model, init, config)?;
    laplace_at(model, &mode, iterations, Method::Laplace)
}

/// Laplace formula at the sample point with the largest `l(θ)`; no Newton
/// refinement.
pub fn laplace_at_map<M: Differentiable + ?Sized>(
    model: &M,
    sample: &[Vec<f64>],
) -> Result<EvidenceEstimate> {
    let mut best: Option<(f64, &Vec<f64>)> = None;
    for theta in sample {
        let l = log_joint(model, theta)?;
        if best.is_none_or(|(b, _)| l > b) {
            best = Some((l, theta));
        }
    }
    let (_, theta) = best.ok_or(EvidenceError::EmptySequence)?;
    laplace_at(model, theta, 0, Method::LaplaceMap)
}
