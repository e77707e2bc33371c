//! Gaussian linear regression with the conjugate prior
//! `β | τ ~ N(m₀, (τQ₀)⁻¹)`, `τ ~ Ga(a₀/2, b₀/2)` (shape/rate), `Q₀` diagonal.
//! θ = (β₀, …, β_{p−1}, τ).

use super::{check_point, AnalyticEvidence, ChibBlocks, Differentiable, Model, TemperedGibbs};
use crate::error::{EvidenceError, Result};
use crate::math::density::{gamma_ln_pdf, ln_gamma, normal_ln_pdf_precision, LN_2PI};
use crate::math::{RngStream, SmallMatrix, MAX_DIM};

#[derive(Debug, Clone)]
pub struct GaussianLinearRegressionModel {
    n: usize,
    p: usize,
    y: Vec<f64>,
    /// Row-major `n × p` design.
    x: Vec<f64>,
    pub prior_mean: Vec<f64>,
    /// Diagonal of `Q₀`.
    pub q0: Vec<f64>,
    pub a0: f64,
    pub b0: f64,
    xtx: SmallMatrix,
    xty: Vec<f64>,
    yty: f64,
    line_mean: Vec<f64>,
    m1: SmallMatrix,
}

impl GaussianLinearRegressionModel {
    /// `design` holds one row per observation, intercept column included.
    pub fn new(
        y: Vec<f64>,
        design: Vec<Vec<f64>>,
        prior_mean: Vec<f64>,
        q0: Vec<f64>,
        a0: f64,
        b0: f64,
    ) -> Result<Self> {
        let p = prior_mean.len();
        if p == 0 || p + 1 > MAX_DIM {
            return Err(EvidenceError::InvalidArgument(format!(
                "unsupported number of line parameters {p}"
            )));
        }
        if q0.len() != p || q0.iter().any(|&q| !(q > 0.0)) {
            return Err(EvidenceError::InvalidArgument(
                "Q0 must be a positive diagonal matching the prior mean".into(),
            ));
        }
        if !(a0 > 0.0 && b0 > 0.0) {
            return Err(EvidenceError::InvalidArgument(
                "a0 and b0 must be positive".into(),
            ));
        }
        if design.len() != y.len() {
            return Err(EvidenceError::DimensionMismatch {
                expected: y.len(),
                actual: design.len(),
            });
        }
        let n = y.len();
        let mut x = Vec::with_capacity(n * p);
        for row in &design {
            if row.len() != p {
                return Err(EvidenceError::DimensionMismatch {
                    expected: p,
                    actual: row.len(),
                });
            }
            x.extend_from_slice(row);
        }
        let xtx = SmallMatrix::from_fn(p, p, |i, j| design.iter().map(|r| r[i] * r[j]).sum());
        let xty = (0..p)
            .map(|i| design.iter().zip(&y).map(|(r, v)| r[i] * v).sum())
            .collect();
        let yty = y.iter().map(|v| v * v).sum();
        let mut model = GaussianLinearRegressionModel {
            n,
            p,
            y,
            x,
            prior_mean,
            q0,
            a0,
            b0,
            xtx,
            xty,
            yty,
            line_mean: Vec::new(),
            m1: SmallMatrix::identity(p),
        };
        let (line_mean, m1) = model.line_conditional(1.0)?;
        model.line_mean = line_mean;
        model.m1 = m1;
        Ok(model)
    }

    /// `yᵢ = β₀ + β₁(xᵢ − x̄) + εᵢ` with prior precision scale `diag(r₀, s₀)`.
    pub fn simple(
        y: Vec<f64>,
        covariate: &[f64],
        prior_mean: [f64; 2],
        r0: f64,
        s0: f64,
        a0: f64,
        b0: f64,
    ) -> Result<Self> {
        let xbar = covariate.iter().sum::<f64>() / covariate.len().max(1) as f64;
        let design = covariate.iter().map(|c| vec![1.0, c - xbar]).collect();
        Self::new(y, design, prior_mean.to_vec(), vec![r0, s0], a0, b0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn line_dim(&self) -> usize {
        self.p
    }

    pub fn response(&self) -> &[f64] {
        &self.y
    }

    pub fn design_row(&self, i: usize) -> &[f64] {
        &self.x[i * self.p..(i + 1) * self.p]
    }

    /// `M = XᵀX + Q₀`.
    pub fn m_matrix(&self) -> SmallMatrix {
        self.m_matrix_at(1.0)
    }

    fn m_matrix_at(&self, t: f64) -> SmallMatrix {
        self.xtx.scaled(t).add(&SmallMatrix::diag(&self.q0))
    }

    /// `Σ (yᵢ − xᵢᵀβ)²` from sufficient statistics.
    pub fn rss(&self, beta: &[f64]) -> f64 {
        let cross: f64 = beta.iter().zip(&self.xty).map(|(b, v)| b * v).sum();
        (self.yty - 2.0 * cross + self.xtx.quad_form(beta)).max(0.0)
    }

    fn prior_quad(&self, beta: &[f64]) -> f64 {
        beta.iter()
            .zip(&self.prior_mean)
            .zip(&self.q0)
            .map(|((b, m), q)| q * (b - m) * (b - m))
            .sum()
    }

    /// Mean and precision scale of `β | τ` under the power posterior at `t`.
    fn line_conditional(&self, t: f64) -> Result<(Vec<f64>, SmallMatrix)> {
        let m = self.m_matrix_at(t);
        let rhs: Vec<f64> = (0..self.p)
            .map(|i| t * self.xty[i] + self.q0[i] * self.prior_mean[i])
            .collect();
        let mean = m.cholesky()?.solve(&rhs);
        Ok((mean, m))
    }

    fn tau_conditional(&self, beta: &[f64], t: f64) -> (f64, f64) {
        let shape = (self.a0 + t * self.n as f64 + self.p as f64) / 2.0;
        let rate = 0.5 * (self.b0 + t * self.rss(beta) + self.prior_quad(beta));
        (shape, rate)
    }

    /// Mean and precision of `β_j | β_{−j}, τ` at `t = 1`.
    fn coordinate_conditional(&self, j: usize, state: &[f64]) -> (f64, f64) {
        let (mean, m) = (&self.line_mean, &self.m1);
        let tau = state[self.p];
        let mut shift = 0.0;
        for k in 0..self.p {
            if k != j {
                shift += m[(j, k)] * (state[k] - mean[k]);
            }
        }
        (mean[j] - shift / m[(j, j)], tau * m[(j, j)])
    }

    fn tau_power(&self) -> f64 {
        (self.a0 + self.n as f64 + self.p as f64) / 2.0 - 1.0
    }
}

impl Model for GaussianLinearRegressionModel {
    fn dimension(&self) -> usize {
        self.p + 1
    }

    fn log_prior(&self, theta: &[f64]) -> f64 {
        let tau = theta[self.p];
        if tau <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let mut lp = gamma_ln_pdf(tau, self.a0 / 2.0, self.b0 / 2.0);
        for k in 0..self.p {
            lp += normal_ln_pdf_precision(theta[k], self.prior_mean[k], tau * self.q0[k]);
        }
        lp
    }

    fn log_likelihood(&self, theta: &[f64]) -> f64 {
        let tau = theta[self.p];
        if tau <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if self.n == 0 {
            return 0.0;
        }
        let n = self.n as f64;
        0.5 * n * (tau.ln() - LN_2PI) - 0.5 * tau * self.rss(&theta[..self.p])
    }

    fn sample_prior(&self, rng: &mut RngStream) -> Vec<f64> {
        let tau = rng.gamma(self.a0 / 2.0, self.b0 / 2.0);
        let mut theta: Vec<f64> = (0..self.p)
            .map(|k| rng.normal(self.prior_mean[k], (tau * self.q0[k]).sqrt().recip()))
            .collect();
        theta.push(tau);
        theta
    }

    fn parameter_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (0..self.p).map(|k| format!("beta{k}")).collect();
        names.push("tau".into());
        names
    }
}

impl AnalyticEvidence for GaussianLinearRegressionModel {
    /// `π^{−n/2} b₀^{a₀/2} Γ((n+a₀)/2)/Γ(a₀/2) · |Q₀|^{1/2}/|M|^{1/2} · (q + b₀)^{−(n+a₀)/2}`
    /// where `q = (y − Xm₀)ᵀ R (y − Xm₀)`, `R = I − X M⁻¹ Xᵀ`, evaluated as
    /// `yᵀy + m₀ᵀQ₀m₀ − cᵀM⁻¹c` with `c = Xᵀy + Q₀m₀`.
    fn analytic_log_evidence(&self) -> Result<f64> {
        let m = self.m_matrix();
        m.cholesky()?;
        Ok(self.log_normalizer_at(1.0).expect("M is SPD"))
    }

    fn log_normalizer_at(&self, t: f64) -> Option<f64> {
        let m = self.m_matrix_at(t);
        let ch = m.cholesky().ok()?;
        let c: Vec<f64> = (0..self.p)
            .map(|i| t * self.xty[i] + self.q0[i] * self.prior_mean[i])
            .collect();
        let z = ch.forward(&c);
        let prior_q: f64 = self.prior_quad(&vec![0.0; self.p]);
        let q = (t * self.yty + prior_q - z.iter().map(|v| v * v).sum::<f64>()).max(0.0);
        let tn = t * self.n as f64;
        let half_a = self.a0 / 2.0;
        let logdet_q0: f64 = self.q0.iter().map(|v| v.ln()).sum();
        Some(
            half_a * (self.b0 / 2.0).ln() - ln_gamma(half_a) + ln_gamma(half_a + tn / 2.0)
                - (half_a + tn / 2.0) * ((self.b0 + q) / 2.0).ln()
                - 0.5 * tn * LN_2PI
                + 0.5 * (logdet_q0 - ch.logdet()),
        )
    }
}

impl Differentiable for GaussianLinearRegressionModel {
    fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        check_point(self, theta)?;
        let tau = theta[self.p];
        if !(tau > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        let beta = &theta[..self.p];
        let xtxb = self.xtx.mul_vec(beta);
        let mut g: Vec<f64> = (0..self.p)
            .map(|k| tau * (self.xty[k] - xtxb[k] - self.q0[k] * (beta[k] - self.prior_mean[k])))
            .collect();
        let total = self.b0 + self.rss(beta) + self.prior_quad(beta);
        g.push(self.tau_power() / tau - 0.5 * total);
        Ok(g)
    }

    fn hessian(&self, theta: &[f64]) -> Result<SmallMatrix> {
        check_point(self, theta)?;
        let p = self.p;
        let tau = theta[p];
        if !(tau > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        let beta = &theta[..p];
        let m = self.m_matrix();
        let xtxb = self.xtx.mul_vec(beta);
        let mut h = SmallMatrix::zeros(p + 1, p + 1);
        for i in 0..p {
            for j in 0..p {
                h[(i, j)] = -tau * m[(i, j)];
            }
            let cross = self.xty[i] - xtxb[i] - self.q0[i] * (beta[i] - self.prior_mean[i]);
            h[(i, p)] = cross;
            h[(p, i)] = cross;
        }
        h[(p, p)] = -self.tau_power() / (tau * tau);
        Ok(h)
    }
}

impl TemperedGibbs for GaussianLinearRegressionModel {
    /// Joint line draw given τ, then τ given the line.
    fn tempered_gibbs_sweep(&self, state: &mut [f64], t: f64, rng: &mut RngStream) -> Result<()> {
        if !(0.0..=1.0).contains(&t) {
            return Err(EvidenceError::InvalidArgument(format!(
                "temperature {t} outside [0, 1]"
            )));
        }
        let tau = state[self.p];
        if !(tau > 0.0) {
            return Err(EvidenceError::NonPositivePrecision);
        }
        let (mean, m) = self.line_conditional(t)?;
        let ch = m.cholesky()?;
        let z: Vec<f64> = (0..self.p).map(|_| rng.standard_normal()).collect();
        let dev = ch.backward(&z);
        let scale = tau.sqrt().recip();
        for k in 0..self.p {
            state[k] = mean[k] + dev[k] * scale;
        }
        let (shape, rate) = self.tau_conditional(&state[..self.p], t);
        state[self.p] = rng.gamma(shape, rate);
        Ok(())
    }
}

/// Ordinate order: τ first, then each line coordinate in turn.
impl ChibBlocks for GaussianLinearRegressionModel {
    fn blocks(&self) -> Vec<Vec<usize>> {
        let mut b = vec![vec![self.p]];
        b.extend((0..self.p).map(|k| vec![k]));
        b
    }

    fn sample_block(&self, block: usize, state: &mut [f64], rng: &mut RngStream) -> Result<()> {
        if block == 0 {
            let (shape, rate) = self.tau_conditional(&state[..self.p], 1.0);
            state[self.p] = rng.gamma(shape, rate);
        } else {
            let j = block - 1;
            let (mean, prec) = self.coordinate_conditional(j, state);
            state[j] = rng.normal(mean, prec.sqrt().recip());
        }
        Ok(())
    }

    fn log_full_conditional(&self, block: usize, state: &[f64]) -> f64 {
        if block == 0 {
            let (shape, rate) = self.tau_conditional(&state[..self.p], 1.0);
            gamma_ln_pdf(state[self.p], shape, rate)
        } else {
            let j = block - 1;
            let (mean, prec) = self.coordinate_conditional(j, state);
            normal_ln_pdf_precision(state[j], mean, prec)
        }
    }

    fn conditional_mode(&self, block: usize, state: &[f64]) -> Vec<f64> {
        if block == 0 {
            let (shape, rate) = self.tau_conditional(&state[..self.p], 1.0);
            vec![(shape - 1.0).max(0.0) / rate]
        } else {
            vec![self.coordinate_conditional(block - 1, state).0]
        }
    }
}
