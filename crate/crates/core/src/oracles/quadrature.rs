//! Tensor-product quadrature of `∫ π(θ) π(y|θ)^t dθ` for models of dimension
//! at most three.
//!
//! Axes live in transformed coordinates so that heavy-tailed or positive
//! parameters are covered by a finite box: precisions on a log scale, and
//! location parameters standardized by their prior conditional scale.

use crate::error::{EvidenceError, Result};
use crate::math::density::ln_gamma;
use crate::models::{
    GaussianLinearRegressionModel, GaussianMeanPrecisionModel, Model, NormalGammaModel,
};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Gamma};

pub const MAX_QUADRATURE_DIM: usize = 3;

const DEFAULT_RULE: Rule = Rule::GaussLegendre { order: 8 };

/// Panels per axis giving prior-mass error near 1e-11 on the built-in grids.
pub const DEFAULT_PANELS: usize = 16;

/// Smallest accepted node count along any axis.
pub const MIN_NODES_PER_AXIS: usize = 32;

/// Prior tail probability left outside each end of a precision axis.
const TAIL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coordinate {
    /// `θ_k = x`, `x ∈ [lo, hi]`.
    Linear { lo: f64, hi: f64 },
    /// `θ_k = eᵘ`, `u ∈ [lo, hi]`.
    Log { lo: f64, hi: f64 },
    /// `θ_k = center + z / √(scale · θ_p)` with `θ_p` a precision resolved on
    /// another axis, `z ∈ [lo, hi]`.
    PrecisionScaled {
        precision_index: usize,
        center: f64,
        scale: f64,
        lo: f64,
        hi: f64,
    },
}

impl Coordinate {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            Coordinate::Linear { lo, hi }
            | Coordinate::Log { lo, hi }
            | Coordinate::PrecisionScaled { lo, hi, .. } => (lo, hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rule {
    Trapezoid,
    /// Composite Gauss-Legendre with `order` nodes per panel.
    GaussLegendre {
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub coordinate: Coordinate,
    pub panels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub axes: Vec<Axis>,
    pub rule: Rule,
    /// Largest tolerated `|∫π(θ)dθ − 1|` over the box.
    pub mass_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub log_evidence: f64,
    pub log_prior_mass: f64,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub nodes: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; order];
    let mut w = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[order - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[order - 1 - i] = w[i];
    }
    (x, w)
}

/// Nodes and log-weights along one axis.
fn axis_rule(axis: &Axis, rule: Rule) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = axis.coordinate.bounds();
    let h = (hi - lo) / axis.panels as f64;
    match rule {
        Rule::Trapezoid => {
            let nodes: Vec<f64> = (0..=axis.panels).map(|i| lo + i as f64 * h).collect();
            let logw = (0..=axis.panels)
                .map(|i| {
                    if i == 0 || i == axis.panels {
                        (0.5 * h).ln()
                    } else {
                        h.ln()
                    }
                })
                .collect();
            (nodes, logw)
        }
        Rule::GaussLegendre { order } => {
            let (gx, gw) = gauss_legendre(order);
            let mut nodes = Vec::with_capacity(axis.panels * order);
            let mut logw = Vec::with_capacity(axis.panels * order);
            for p in 0..axis.panels {
                let mid = lo + (p as f64 + 0.5) * h;
                for (x, w) in gx.iter().zip(&gw) {
                    nodes.push(mid + 0.5 * h * x);
                    logw.push((0.5 * h * w).ln());
                }
            }
            (nodes, logw)
        }
    }
}

/// Streaming `log Σ exp` together with weighted first and second moments.
struct Accumulator {
    max: f64,
    sum: f64,
    s1: Vec<f64>,
    s2: Vec<f64>,
}

impl Accumulator {
    fn new(d: usize) -> Self {
        Accumulator {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            s1: vec![0.0; d],
            s2: vec![0.0; d],
        }
    }

    fn push(&mut self, logv: f64, theta: &[f64]) {
        if logv == f64::NEG_INFINITY {
            return;
        }
        if logv > self.max {
            let scale = (self.max - logv).exp();
            self.sum *= scale;
            self.s1.iter_mut().for_each(|v| *v *= scale);
            self.s2.iter_mut().for_each(|v| *v *= scale);
            self.max = logv;
        }
        let w = (logv - self.max).exp();
        self.sum += w;
        for (k, t) in theta.iter().enumerate() {
            self.s1[k] += w * t;
            self.s2[k] += w * t * t;
        }
    }

    fn log_total(&self) -> f64 {
        self.max + self.sum.ln()
    }
}

impl QuadratureGrid {
    pub fn validate(&self, dimension: usize) -> Result<()> {
        if dimension > MAX_QUADRATURE_DIM || self.axes.len() != dimension {
            return Err(EvidenceError::InvalidArgument(format!(
                "quadrature needs one axis per parameter and at most {MAX_QUADRATURE_DIM} parameters"
            )));
        }
        for (k, a) in self.axes.iter().enumerate() {
            let (lo, hi) = a.coordinate.bounds();
            if !(lo < hi) || a.panels == 0 {
                return Err(EvidenceError::InvalidArgument(format!("empty axis {k}")));
            }
            if let Coordinate::PrecisionScaled {
                precision_index,
                scale,
                ..
            } = a.coordinate
            {
                let dep = self.axes.get(precision_index).map(|d| d.coordinate);
                if !matches!(dep, Some(Coordinate::Log { .. })) || !(scale > 0.0) {
                    return Err(EvidenceError::InvalidArgument(format!(
                        "axis {k} must be scaled by a log-precision axis"
                    )));
                }
            }
        }
        if let Rule::GaussLegendre { order } = self.rule {
            if order == 0 {
                return Err(EvidenceError::InvalidArgument("zero-order rule".into()));
            }
        }
        if self
            .axes
            .iter()
            .any(|a| self.axis_nodes(a) < MIN_NODES_PER_AXIS)
        {
            return Err(EvidenceError::InvalidArgument(format!(
                "every axis needs at least {MIN_NODES_PER_AXIS} nodes"
            )));
        }
        Ok(())
    }

    /// Same box with every axis split into twice as many panels.
    pub fn doubled(&self) -> Self {
        let mut g = self.clone();
        g.axes.iter_mut().for_each(|a| a.panels *= 2);
        g
    }

    fn axis_nodes(&self, a: &Axis) -> usize {
        match self.rule {
            Rule::Trapezoid => a.panels + 1,
            Rule::GaussLegendre { order } => a.panels * order,
        }
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(|a| self.axis_nodes(a)).product()
    }

    fn gamma_log_axis(shape: f64, rate: f64, panels: usize) -> Result<Axis> {
        let g = Gamma::new(shape, rate)
            .map_err(|e| EvidenceError::InvalidArgument(format!("gamma prior: {e}")))?;
        // P(a, x) <= x^a / Γ(a+1), so this log bound never cuts more than
        // TAIL; it stays finite where the quantile itself underflows.
        let lo_bound = (TAIL.ln() + ln_gamma(shape + 1.0)) / shape - rate.ln();
        let lo = lo_bound.min(g.inverse_cdf(TAIL).ln());
        let hi = g.inverse_cdf(1.0 - TAIL);
        Ok(Axis {
            coordinate: Coordinate::Log { lo, hi: hi.ln() },
            panels,
        })
    }

    /// `(μ, τ)` axes for the normal-gamma model.
    pub fn normal_gamma(model: &NormalGammaModel, panels: usize) -> Result<Self> {
        let tau = Self::gamma_log_axis(model.a0, model.b0, panels)?;
        let mu = Axis {
            coordinate: Coordinate::PrecisionScaled {
                precision_index: 1,
                center: model.mu0,
                scale: model.tau0,
                lo: -10.0,
                hi: 10.0,
            },
            panels,
        };
        Ok(QuadratureGrid {
            axes: vec![mu, tau],
            rule: DEFAULT_RULE,
            mass_tolerance: 1e-8,
        })
    }

    /// `(μ, τ)` axes for independent normal and gamma priors.
    pub fn gaussian_mean_precision(
        model: &GaussianMeanPrecisionModel,
        panels: usize,
    ) -> Result<Self> {
        let sd = model.nu.sqrt().recip();
        let mu = Axis {
            coordinate: Coordinate::Linear {
                lo: model.xi - 10.0 * sd,
                hi: model.xi + 10.0 * sd,
            },
            panels,
        };
        let tau = Self::gamma_log_axis(0.5 * model.a0, 0.5 * model.b0, panels)?;
        Ok(QuadratureGrid {
            axes: vec![mu, tau],
            rule: DEFAULT_RULE,
            mass_tolerance: 1e-8,
        })
    }

    /// `(β₀, β₁, τ)` axes for a simple linear regression.
    pub fn regression(model: &GaussianLinearRegressionModel, panels: usize) -> Result<Self> {
        let p = model.line_dim();
        let mut axes: Vec<Axis> = (0..p)
            .map(|k| Axis {
                coordinate: Coordinate::PrecisionScaled {
                    precision_index: p,
                    center: model.prior_mean[k],
                    scale: model.q0[k],
                    lo: -10.0,
                    hi: 10.0,
                },
                panels,
            })
            .collect();
        axes.push(Self::gamma_log_axis(
            0.5 * model.a0,
            0.5 * model.b0,
            panels,
        )?);
        Ok(QuadratureGrid {
            axes,
            rule: DEFAULT_RULE,
            mass_tolerance: 1e-8,
        })
    }
}

/// Integrates `π(θ) π(y|θ)^t` over the grid. The prior alone is integrated
/// first; if its mass is off by more than the grid's tolerance the grid is
/// rejected.
pub fn quadrature<M: Model + ?Sized>(
    model: &M,
    grid: &QuadratureGrid,
    t: f64,
) -> Result<QuadratureResult> {
    let d = model.dimension();
    grid.validate(d)?;
    let rules: Vec<(Vec<f64>, Vec<f64>)> =
        grid.axes.iter().map(|a| axis_rule(a, grid.rule)).collect();
    let counts: Vec<usize> = rules.iter().map(|r| r.0.len()).collect();
    let total: usize = counts.iter().product();

    let mut prior = Accumulator::new(d);
    let mut post = Accumulator::new(d);
    let mut idx = vec![0usize; d];
    let mut theta = vec![0.0; d];
    for _ in 0..total {
        let mut logw = 0.0;
        // independent axes first, then the ones scaled by a precision
        for pass in 0..2 {
            for k in 0..d {
                let x = rules[k].0[idx[k]];
                match (pass, grid.axes[k].coordinate) {
                    (0, Coordinate::Linear { .. }) => {
                        theta[k] = x;
                        logw += rules[k].1[idx[k]];
                    }
                    (0, Coordinate::Log { .. }) => {
                        theta[k] = x.exp();
                        logw += rules[k].1[idx[k]] + x;
                    }
                    (
                        1,
                        Coordinate::PrecisionScaled {
                            precision_index,
                            center,
                            scale,
                            ..
                        },
                    ) => {
                        let s = (scale * theta[precision_index]).sqrt().recip();
                        theta[k] = center + x * s;
                        logw += rules[k].1[idx[k]] + s.ln();
                    }
                    _ => {}
                }
            }
        }
        let lp = model.log_prior(&theta);
        if lp.is_nan() {
            return Err(EvidenceError::NotANumber("log prior on grid"));
        }
        prior.push(logw + lp, &theta);
        if lp > f64::NEG_INFINITY {
            let ll = if t == 0.0 {
                0.0
            } else {
                t * model.log_likelihood(&theta)
            };
            if ll.is_nan() {
                return Err(EvidenceError::NotANumber("log likelihood on grid"));
            }
            post.push(logw + lp + ll, &theta);
        }
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
        }
    }

    let log_mass = prior.log_total();
    if !((log_mass.exp() - 1.0).abs() <= grid.mass_tolerance) {
        return Err(EvidenceError::GridTruncation {
            mass: log_mass.exp(),
        });
    }
    let mean: Vec<f64> = post.s1.iter().map(|s| s / post.sum).collect();
    let variance = post
        .s2
        .iter()
        .zip(&mean)
        .map(|(s, m)| s / post.sum - m * m)
        .collect();
    Ok(QuadratureResult {
        log_evidence: post.log_total(),
        log_prior_mass: log_mass,
        mean,
        variance,
        nodes: total,
    })
}

pub fn quadrature_log_evidence<M: Model + ?Sized>(model: &M, grid: &QuadratureGrid) -> Result<f64> {
    quadrature(model, grid, 1.0).map(|r| r.log_evidence)
}

/// Doubles every axis until two successive log evidences differ by less than
/// `tol` nats. Returns the finer result.
pub fn refined_quadrature<M: Model + ?Sized>(
    model: &M,
    grid: &QuadratureGrid,
    tol: f64,
    max_nodes: usize,
) -> Result<QuadratureResult> {
    // Coarse grids may fail the prior-mass check; keep doubling past them.
    let attempt = |g: &QuadratureGrid| match quadrature(model, g, 1.0) {
        Err(EvidenceError::GridTruncation { .. }) => Ok(None),
        r => r.map(Some),
    };
    let mut g = grid.clone();
    let mut prev = attempt(&g)?;
    loop {
        let tried = g.node_count();
        g = g.doubled();
        if g.node_count() > max_nodes {
            return Err(EvidenceError::QuadratureNotConverged {
                nodes: tried,
                tolerance: tol,
            });
        }
        let next = attempt(&g)?;
        if let (Some(p), Some(n)) = (&prev, &next) {
            if (n.log_evidence - p.log_evidence).abs() < tol {
                return Ok(next.unwrap());
            }
        }
        prev = next;
    }
}
