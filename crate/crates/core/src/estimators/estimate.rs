use crate::error::{EvidenceError, Result};
use crate::math::{LogValue, RngStream};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Laplace,
    LaplaceMap,
    HarmonicMean,
    Chib,
    Ais,
    NestedSampling,
    PowerPosterior,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Exact,
        Method::Laplace,
        Method::LaplaceMap,
        Method::HarmonicMean,
        Method::Chib,
        Method::Ais,
        Method::NestedSampling,
        Method::PowerPosterior,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Laplace => "laplace",
            Method::LaplaceMap => "laplace_map",
            Method::HarmonicMean => "harmonic_mean",
            Method::Chib => "chib",
            Method::Ais => "ais",
            Method::NestedSampling => "nested_sampling",
            Method::PowerPosterior => "power_posterior",
        }
    }

    /// Whether replicates of this method differ by seed.
    pub fn is_stochastic(&self) -> bool {
        !matches!(self, Method::Exact | Method::Laplace)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Method {
    type Err = EvidenceError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| EvidenceError::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Mean log-likelihood at one rung of a power-posterior ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RungSummary {
    pub t: f64,
    pub mean_log_likelihood: f64,
    pub standard_error: f64,
    pub acceptance_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    None,
    Laplace {
        iterations: usize,
        gradient_norm: f64,
        mode: Vec<f64>,
        log_det_neg_hessian: f64,
    },
    HarmonicMean {
        draws: usize,
    },
    Chib {
        star: Vec<f64>,
        log_likelihood: f64,
        log_prior: f64,
        /// Log ordinate of each block, in ordinate order.
        log_ordinates: Vec<f64>,
    },
    Ais {
        samples: usize,
        rungs: usize,
        /// Variance of the weights normalized to mean one.
        normalized_weight_variance: f64,
        effective_sample_size: f64,
        /// `(t, acceptance rate)` for Metropolis kernels; empty for Gibbs.
        acceptance: Vec<(f64, f64)>,
    },
    NestedSampling {
        live_points: usize,
        iterations: usize,
        log_end_correction: f64,
        final_log_prior_mass: f64,
        stalled_levels: usize,
        hit_iteration_cap: bool,
    },
    PowerPosterior {
        rungs: Vec<RungSummary>,
    },
}

/// `(seed, stream id)` of the stream that produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub stream_id: u64,
}

impl From<&RngStream> for Provenance {
    fn from(r: &RngStream) -> Self {
        Provenance {
            seed: r.seed(),
            stream_id: r.stream_id(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceEstimate {
    pub log_evidence: LogValue,
    pub method: Method,
    pub diagnostics: Diagnostics,
    pub provenance: Option<Provenance>,
}

impl EvidenceEstimate {
    /// Fails on a non-finite value instead of silently reporting zero evidence.
    pub fn new(log_evidence: f64, method: Method, diagnostics: Diagnostics) -> Result<Self> {
        if !log_evidence.is_finite() {
            return Err(EvidenceError::NonFiniteEstimate);
        }
        Ok(EvidenceEstimate {
            log_evidence: LogValue::new(log_evidence)?,
            method,
            diagnostics,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, rng: &RngStream) -> Self {
        self.provenance = Some(rng.into());
        self
    }

    pub fn log_value(&self) -> f64 {
        self.log_evidence.get()
    }
}
