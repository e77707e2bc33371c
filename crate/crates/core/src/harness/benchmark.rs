//! The benchmark model families, built from ingested data or seeded
//! synthetic draws.

use super::dataset::DataTable;
use super::HarnessError;
use crate::math::RngStream;
use crate::models::{
    standardize_covariates, AnalyticEvidence, GaussianLinearRegressionModel,
    LogisticRegressionModel, Model, NormalGammaModel,
};
use crate::oracles::{refined_quadrature, QuadratureGrid, DEFAULT_PANELS};
use serde::{Deserialize, Serialize};

/// Conjugate prior shared by both radiata pine regressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadiataPrior {
    pub r0: f64,
    pub s0: f64,
    pub a0: f64,
    pub b0: f64,
    pub mean: [f64; 2],
}

impl Default for RadiataPrior {
    fn default() -> Self {
        RadiataPrior {
            r0: 0.06,
            s0: 6.0,
            a0: 6.0,
            b0: 4.0 * 300.0 * 300.0,
            mean: [3000.0, 185.0],
        }
    }
}

/// Largest grid the oracle will integrate over.
pub const QUADRATURE_NODE_BUDGET: usize = 1 << 22;

/// Covariates of the two logistic models compared on the Pima data.
pub const PIMA_MODEL1: [&str; 4] = ["NP", "PGC", "BMI", "DP"];
pub const PIMA_MODEL2: [&str; 5] = ["NP", "PGC", "BMI", "DP", "AGE"];

#[derive(Debug, Clone)]
pub enum BenchModel {
    Regression(GaussianLinearRegressionModel),
    NormalGamma(NormalGammaModel),
    Logistic(LogisticRegressionModel),
}

impl BenchModel {
    pub fn as_model(&self) -> &dyn Model {
        match self {
            BenchModel::Regression(m) => m,
            BenchModel::NormalGamma(m) => m,
            BenchModel::Logistic(m) => m,
        }
    }

    pub fn analytic_log_evidence(&self) -> Option<crate::Result<f64>> {
        match self {
            BenchModel::Regression(m) => Some(m.analytic_log_evidence()),
            BenchModel::NormalGamma(m) => Some(m.analytic_log_evidence()),
            BenchModel::Logistic(_) => None,
        }
    }

    /// Tensor-grid value for models of dimension at most three, refined by
    /// doubling until it moves by less than 1e-8 nats or exceeds
    /// [`QUADRATURE_NODE_BUDGET`].
    pub fn quadrature_log_evidence(&self) -> Option<crate::Result<f64>> {
        let grid = match self {
            BenchModel::Regression(m) if m.dimension() <= 3 => {
                QuadratureGrid::regression(m, DEFAULT_PANELS)
            }
            BenchModel::NormalGamma(m) => QuadratureGrid::normal_gamma(m, DEFAULT_PANELS),
            _ => return None,
        };
        let model = self.as_model();
        Some(grid.and_then(|g| {
            refined_quadrature(model, &g, 1e-8, QUADRATURE_NODE_BUDGET).map(|r| r.log_evidence)
        }))
    }

    /// Prior mean, used as the Newton starting point.
    pub fn prior_mean(&self) -> Vec<f64> {
        match self {
            BenchModel::Regression(m) => {
                let mut v = m.prior_mean.clone();
                v.push(m.a0 / m.b0);
                v
            }
            BenchModel::NormalGamma(m) => vec![m.mu0, m.a0 / m.b0],
            BenchModel::Logistic(m) => vec![0.0; m.dimension()],
        }
    }
}

#[derive(Debug, Clone)]
pub struct NamedModel {
    pub name: String,
    pub model: BenchModel,
}

/// Model 1 regresses strength on density, Model 2 on resin-adjusted density.
pub fn radiata_models(
    table: &DataTable,
    prior: &RadiataPrior,
) -> Result<Vec<NamedModel>, HarnessError> {
    let col = |n: &str| {
        table
            .column(n)
            .ok_or_else(|| HarnessError::Config(format!("dataset lacks column {n}")))
    };
    let y = col("y")?.to_vec();
    let build = |cov: &[f64]| {
        GaussianLinearRegressionModel::simple(
            y.clone(),
            cov,
            prior.mean,
            prior.r0,
            prior.s0,
            prior.a0,
            prior.b0,
        )
    };
    Ok(vec![
        NamedModel {
            name: "model1".into(),
            model: BenchModel::Regression(build(col("x")?)?),
        },
        NamedModel {
            name: "model2".into(),
            model: BenchModel::Regression(build(col("z")?)?),
        },
    ])
}

fn pima_model(
    table: &DataTable,
    covariates: &[&str],
    tau_prior: f64,
) -> Result<LogisticRegressionModel, HarnessError> {
    let columns = covariates
        .iter()
        .map(|c| {
            table
                .column(c)
                .map(<[f64]>::to_vec)
                .ok_or_else(|| HarnessError::Config(format!("dataset lacks column {c}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let design = standardize_covariates(covariates, &columns)?.design_with_intercept();
    let y = table
        .column("diabetes")
        .ok_or_else(|| HarnessError::Config("dataset lacks column diabetes".into()))?
        .iter()
        .map(|&v| {
            if v == 1.0 {
                1u8
            } else if v == 0.0 {
                0
            } else {
                2
            }
        })
        .collect();
    Ok(LogisticRegressionModel::new(design, y, tau_prior)?.with_names(covariates))
}

/// The two top-ranked logistic models, with standardized covariates.
pub fn pima_models(table: &DataTable, tau_prior: f64) -> Result<Vec<NamedModel>, HarnessError> {
    Ok(vec![
        NamedModel {
            name: "model1".into(),
            model: BenchModel::Logistic(pima_model(table, &PIMA_MODEL1, tau_prior)?),
        },
        NamedModel {
            name: "model2".into(),
            model: BenchModel::Logistic(pima_model(table, &PIMA_MODEL2, tau_prior)?),
        },
    ])
}

/// Seeded synthetic sample `yᵢ ~ N(mean, sd²)`.
pub fn synthetic_normal(n: usize, mean: f64, sd: f64, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::for_task(seed, &["synthetic-data"], 0);
    (0..n).map(|_| rng.normal(mean, sd)).collect()
}

/// Synthetic normal-gamma design: one model per prior relative precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalGammaDesign {
    pub n: usize,
    pub data_seed: u64,
    pub data_mean: f64,
    pub data_sd: f64,
    pub mu0: f64,
    pub tau0: Vec<f64>,
    pub a0: f64,
    pub b0: f64,
}

impl Default for NormalGammaDesign {
    fn default() -> Self {
        NormalGammaDesign::seeded_instance()
    }
}

impl NormalGammaDesign {
    /// `n = 100` draws of N(0, 1) with `μ₀ = 0`, `τ₀ = 1`, `a₀ = b₀ = 2`.
    pub fn seeded_instance() -> Self {
        NormalGammaDesign {
            n: 100,
            data_seed: 20_100,
            data_mean: 0.0,
            data_sd: 1.0,
            mu0: 0.0,
            tau0: vec![1.0],
            a0: 2.0,
            b0: 2.0,
        }
    }

    /// Vague gamma prior and four prior relative precisions for `μ`.
    pub fn prior_sensitivity(data_seed: u64) -> Self {
        NormalGammaDesign {
            n: 100,
            data_seed,
            data_mean: 0.0,
            data_sd: 1.0,
            mu0: 0.0,
            tau0: vec![1e-4, 1e-2, 0.1, 1.0],
            a0: 0.001,
            b0: 0.001,
        }
    }

    pub fn models(&self) -> Result<Vec<NamedModel>, HarnessError> {
        if self.tau0.is_empty() {
            return Err(HarnessError::Config(
                "normal_gamma design needs at least one tau0".into(),
            ));
        }
        let y = synthetic_normal(self.n, self.data_mean, self.data_sd, self.data_seed);
        self.tau0
            .iter()
            .map(|&t0| {
                Ok(NamedModel {
                    name: format!("tau0={t0:e}"),
                    model: BenchModel::NormalGamma(NormalGammaModel::new(
                        y.clone(),
                        self.mu0,
                        t0,
                        self.a0,
                        self.b0,
                    )?),
                })
            })
            .collect()
    }
}
