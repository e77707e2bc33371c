//! Experiment configuration, read from TOML.
//!
//! ```toml
//! name = "radiata"
//! replicates = 18
//! seed = 7
//! output_dir = "results/radiata"   # relative to this file
//! threads = 0                      # 0: one worker per core
//! budget = "radiata"               # estimator defaults: "radiata" or "pima"
//! bayes_factors = [["model2", "model1"]]
//!
//! [benchmark]
//! kind = "radiata"                 # radiata | pima | normal_gamma
//! dataset = "../data/radiata_pine.csv"
//! sha256 = "…"
//!
//! [estimators.chib]                # an empty section runs with the budget defaults
//! [estimators.power_posterior]
//! iterations = 5000
//! ladder = { steps = 100, exponent = 5.0 }
//! ```
//!
//! Without an `[estimators]` table every method applicable to the benchmark
//! runs with the budget defaults.

use super::benchmark::{NormalGammaDesign, RadiataPrior};
use super::HarnessError;
use crate::estimators::{
    ChibConfig, Method, NestedConfig, NewtonConfig, TemperatureLadder, WarmStart,
};
use crate::samplers::ChainConfig;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Environment variable that replaces the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "EVIDENCE_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BenchmarkConfig {
    Radiata {
        dataset: PathBuf,
        sha256: Option<String>,
        #[serde(default)]
        prior: RadiataPrior,
    },
    Pima {
        dataset: PathBuf,
        sha256: Option<String>,
        tau_prior: f64,
    },
    NormalGamma(NormalGammaDesign),
}

impl BenchmarkConfig {
    pub fn default_budget(&self) -> Budget {
        match self {
            BenchmarkConfig::Pima { .. } => Budget::Pima,
            _ => Budget::Radiata,
        }
    }

    pub fn applicable(&self, method: Method) -> bool {
        match self {
            BenchmarkConfig::Pima { .. } => !matches!(method, Method::Exact | Method::Chib),
            _ => true,
        }
    }

    fn default_bayes_factors(&self) -> Vec<[String; 2]> {
        let pair = |a: &str, b: &str| vec![[a.to_string(), b.to_string()]];
        match self {
            BenchmarkConfig::Radiata { .. } => pair("model2", "model1"),
            BenchmarkConfig::Pima { .. } => pair("model1", "model2"),
            BenchmarkConfig::NormalGamma(_) => Vec::new(),
        }
    }
}

/// Named sample-budget presets supplying every estimator default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    /// Conjugate regressions: Gibbs kernels, 505,000-sweep posterior runs,
    /// 101-rung ladders.
    Radiata,
    /// About 200,000 likelihood-sampling steps per method.
    Pima,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LadderSpec {
    Power { steps: usize, exponent: f64 },
    Explicit { values: Vec<f64> },
}

impl LadderSpec {
    pub fn build(&self) -> crate::Result<TemperatureLadder> {
        match self {
            LadderSpec::Power { steps, exponent } => TemperatureLadder::power(*steps, *exponent),
            LadderSpec::Explicit { values } => TemperatureLadder::explicit(values.clone()),
        }
    }
}

/// Posterior run feeding the harmonic-mean and MAP-Laplace estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosteriorSampleSettings {
    pub iterations: usize,
    pub burn_in_fraction: f64,
    pub thinning: usize,
    /// `τ_p` of the random-walk kernel used when no Gibbs sweep exists.
    pub proposal_precision: f64,
}

impl PosteriorSampleSettings {
    pub fn chain(&self) -> crate::Result<ChainConfig> {
        ChainConfig::new(self.iterations, self.burn_in_fraction, self.thinning)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AisSettings {
    pub ladder: LadderSpec,
    pub samples: usize,
    pub sweeps: usize,
    pub proposal_precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSettings {
    pub ladder: LadderSpec,
    pub iterations: usize,
    pub burn_in_fraction: f64,
    pub thinning: usize,
    pub warm_start: WarmStart,
    pub proposal_precision: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactSettings {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EstimatorSettings {
    Exact(ExactSettings),
    Laplace(NewtonConfig),
    LaplaceMap(PosteriorSampleSettings),
    HarmonicMean(PosteriorSampleSettings),
    Chib(ChibConfig),
    Ais(AisSettings),
    NestedSampling(NestedConfig),
    PowerPosterior(PowerSettings),
}

impl EstimatorSettings {
    pub fn method(&self) -> Method {
        match self {
            EstimatorSettings::Exact(_) => Method::Exact,
            EstimatorSettings::Laplace(_) => Method::Laplace,
            EstimatorSettings::LaplaceMap(_) => Method::LaplaceMap,
            EstimatorSettings::HarmonicMean(_) => Method::HarmonicMean,
            EstimatorSettings::Chib(_) => Method::Chib,
            EstimatorSettings::Ais(_) => Method::Ais,
            EstimatorSettings::NestedSampling(_) => Method::NestedSampling,
            EstimatorSettings::PowerPosterior(_) => Method::PowerPosterior,
        }
    }

    /// Budget defaults for `method`.
    pub fn defaults(method: Method, budget: Budget) -> Self {
        let pima = budget == Budget::Pima;
        let posterior = PosteriorSampleSettings {
            iterations: if pima { 250_000 } else { 505_000 },
            burn_in_fraction: 0.2,
            thinning: 1,
            proposal_precision: 2.0,
        };
        match method {
            Method::Exact => EstimatorSettings::Exact(ExactSettings {}),
            Method::Laplace => EstimatorSettings::Laplace(NewtonConfig::default()),
            Method::LaplaceMap => EstimatorSettings::LaplaceMap(posterior),
            Method::HarmonicMean => EstimatorSettings::HarmonicMean(posterior),
            Method::Chib => EstimatorSettings::Chib(ChibConfig::default()),
            // Pima: 200 samples x 1001 temperatures x 1 sweep. Splitting the same
            // budget as 2000 x 101 leaves an effective sample size near 3.
            Method::Ais => EstimatorSettings::Ais(AisSettings {
                ladder: LadderSpec::Power {
                    steps: if pima { 1000 } else { 100 },
                    exponent: 5.0,
                },
                samples: if pima { 200 } else { 1000 },
                sweeps: if pima { 1 } else { 5 },
                proposal_precision: 2.0,
            }),
            Method::NestedSampling => EstimatorSettings::NestedSampling(NestedConfig {
                live_points: if pima { 2000 } else { 1000 },
                ..NestedConfig::default()
            }),
            // Pima: 101 rungs x 2000 iterations. Eleven rungs of 20,000 cost the
            // same but carry several nats of trapezoid bias.
            Method::PowerPosterior => EstimatorSettings::PowerPosterior(PowerSettings {
                ladder: LadderSpec::Power {
                    steps: 100,
                    exponent: 5.0,
                },
                iterations: if pima { 2000 } else { 5000 },
                burn_in_fraction: 0.2,
                thinning: 1,
                warm_start: WarmStart::SampleMean,
                proposal_precision: 2.0,
            }),
        }
    }

    fn to_table(&self) -> toml::Table {
        let value = match self {
            EstimatorSettings::Exact(s) => toml::Table::try_from(s),
            EstimatorSettings::Laplace(s) => toml::Table::try_from(s),
            EstimatorSettings::LaplaceMap(s) | EstimatorSettings::HarmonicMean(s) => {
                toml::Table::try_from(s)
            }
            EstimatorSettings::Chib(s) => toml::Table::try_from(s),
            EstimatorSettings::Ais(s) => toml::Table::try_from(s),
            EstimatorSettings::NestedSampling(s) => toml::Table::try_from(s),
            EstimatorSettings::PowerPosterior(s) => toml::Table::try_from(s),
        };
        value.expect("settings serialize to a table")
    }

    /// Budget defaults overlaid with the keys of `overrides`.
    pub fn resolve(
        method: Method,
        budget: Budget,
        overrides: &toml::Table,
    ) -> Result<Self, HarnessError> {
        let mut table = Self::defaults(method, budget).to_table();
        for (k, v) in overrides {
            table.insert(k.clone(), v.clone());
        }
        fn parse<T: DeserializeOwned>(method: Method, t: toml::Table) -> Result<T, HarnessError> {
            t.try_into().map_err(|e: toml::de::Error| {
                HarnessError::Config(format!("[estimators.{method}]: {}", e.message()))
            })
        }
        let s = match method {
            Method::Exact => EstimatorSettings::Exact(parse(method, table)?),
            Method::Laplace => EstimatorSettings::Laplace(parse(method, table)?),
            Method::LaplaceMap => EstimatorSettings::LaplaceMap(parse(method, table)?),
            Method::HarmonicMean => EstimatorSettings::HarmonicMean(parse(method, table)?),
            Method::Chib => EstimatorSettings::Chib(parse(method, table)?),
            Method::Ais => EstimatorSettings::Ais(parse(method, table)?),
            Method::NestedSampling => EstimatorSettings::NestedSampling(parse(method, table)?),
            Method::PowerPosterior => EstimatorSettings::PowerPosterior(parse(method, table)?),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| {
            Err(HarnessError::Config(format!(
                "[estimators.{}]: {msg}",
                self.method()
            )))
        };
        match self {
            EstimatorSettings::LaplaceMap(s) | EstimatorSettings::HarmonicMean(s) => {
                s.chain()?;
                if !(s.proposal_precision > 0.0) {
                    return bad("proposal_precision must be positive".into());
                }
            }
            EstimatorSettings::Ais(s) => {
                s.ladder.build()?;
                if s.samples == 0 || s.sweeps == 0 {
                    return bad("samples and sweeps must be positive".into());
                }
            }
            EstimatorSettings::PowerPosterior(s) => {
                s.ladder.build()?;
                ChainConfig::new(s.iterations, s.burn_in_fraction, s.thinning)?;
            }
            EstimatorSettings::NestedSampling(s) if s.live_points < 2 => {
                return bad("live_points must be at least 2".into());
            }
            EstimatorSettings::Chib(s) if s.iterations == 0 || s.reduced_iterations == 0 => {
                return bad("iterations must be positive".into());
            }
            _ => {}
        }
        Ok(())
    }
}

/// The file as written, before defaults are filled in.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    #[serde(default = "one")]
    replicates: usize,
    #[serde(default)]
    seed: u64,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    threads: usize,
    budget: Option<Budget>,
    bayes_factors: Option<Vec<[String; 2]>>,
    benchmark: BenchmarkConfig,
    estimators: Option<BTreeMap<String, toml::Table>>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub replicates: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Worker cap; 0 uses every core.
    pub threads: usize,
    pub budget: Budget,
    /// `(numerator, denominator)` model names.
    pub bayes_factors: Vec<[String; 2]>,
    pub benchmark: BenchmarkConfig,
    /// In canonical method order.
    pub estimators: Vec<EstimatorSettings>,
}

impl ExperimentConfig {
    /// Parses TOML text; relative paths are resolved against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self, HarnessError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let budget = raw.budget.unwrap_or_else(|| raw.benchmark.default_budget());
        let estimators = match &raw.estimators {
            None => Method::ALL
                .into_iter()
                .filter(|m| raw.benchmark.applicable(*m))
                .map(|m| EstimatorSettings::resolve(m, budget, &toml::Table::new()))
                .collect::<Result<Vec<_>, _>>()?,
            Some(map) => {
                let mut chosen = map
                    .iter()
                    .map(|(k, t)| {
                        let m: Method = k.parse().map_err(|_| {
                            HarnessError::Config(format!("unknown estimator [estimators.{k}]"))
                        })?;
                        EstimatorSettings::resolve(m, budget, t)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                chosen.sort_by_key(EstimatorSettings::method);
                chosen
            }
        };
        let mut benchmark = raw.benchmark;
        match &mut benchmark {
            BenchmarkConfig::Radiata { dataset, .. } | BenchmarkConfig::Pima { dataset, .. } => {
                *dataset = base_dir.join(&*dataset);
            }
            BenchmarkConfig::NormalGamma(_) => {}
        }
        let output_dir = base_dir.join(
            raw.output_dir
                .unwrap_or_else(|| PathBuf::from("results").join(&raw.name)),
        );
        let config = ExperimentConfig {
            bayes_factors: raw
                .bayes_factors
                .unwrap_or_else(|| benchmark.default_bayes_factors()),
            name: raw.name,
            replicates: raw.replicates,
            seed: raw.seed,
            output_dir,
            threads: raw.threads,
            budget,
            benchmark,
            estimators,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base)
    }

    /// Replaces the output directory when [`OUTPUT_DIR_ENV`] is set.
    pub fn apply_env_override(&mut self) {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()) {
            self.output_dir = PathBuf::from(dir);
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.replicates == 0 {
            return Err(HarnessError::Config("replicates must be at least 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(HarnessError::Config("no estimators selected".into()));
        }
        if let BenchmarkConfig::Pima { tau_prior, .. } = self.benchmark {
            if !(tau_prior > 0.0) {
                return Err(HarnessError::Config("tau_prior must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn settings(&self, method: Method) -> Option<&EstimatorSettings> {
        self.estimators.iter().find(|s| s.method() == method)
    }
}
