use crate::error::{EvidenceError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum LadderPolicy {
    /// `t_i = (i/m)^exponent`, `i = 0..=m`.
    Power {
        exponent: f64,
        steps: usize,
    },
    Explicit,
}

/// Strictly increasing temperatures from exactly 0 to exactly 1.
///
/// Annealing runs the same grid from 1 down to 0: the power ladder
/// `(1 − i/m)^p` is this ladder read backwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureLadder {
    values: Vec<f64>,
    policy: LadderPolicy,
}

impl TemperatureLadder {
    pub fn power(steps: usize, exponent: f64) -> Result<Self> {
        if steps == 0 || !(exponent > 0.0) || !exponent.is_finite() {
            return Err(EvidenceError::BadLadder(format!(
                "power ladder needs steps ≥ 1 and a positive exponent, got {steps} and {exponent}"
            )));
        }
        let m = steps as f64;
        let values = (0..=steps)
            .map(|i| {
                if i == steps {
                    1.0
                } else {
                    (i as f64 / m).powf(exponent)
                }
            })
            .collect();
        Self::checked(values, LadderPolicy::Power { exponent, steps })
    }

    /// Accepts either direction; values are stored increasing.
    pub fn explicit(mut values: Vec<f64>) -> Result<Self> {
        if values.len() >= 2 && values[0] > values[values.len() - 1] {
            values.reverse();
        }
        Self::checked(values, LadderPolicy::Explicit)
    }

    fn checked(values: Vec<f64>, policy: LadderPolicy) -> Result<Self> {
        if values.len() < 2 {
            return Err(EvidenceError::BadLadder("need at least two rungs".into()));
        }
        if values[0] != 0.0 || values[values.len() - 1] != 1.0 {
            return Err(EvidenceError::BadLadder(format!(
                "endpoints must be exactly 0 and 1, got {} and {}",
                values[0],
                values[values.len() - 1]
            )));
        }
        if let Some(w) = values.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(EvidenceError::BadLadder(format!(
                "not strictly monotone at {} → {}",
                w[0], w[1]
            )));
        }
        Ok(TemperatureLadder { values, policy })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn policy(&self) -> &LadderPolicy {
        &self.policy
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest strictly positive temperature.
    pub fn first_positive(&self) -> f64 {
        self.values[1]
    }

    /// The same grid read from 1 down to 0.
    pub fn descending(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().rev().copied()
    }

    /// Every other rung removed, keeping both endpoints.
    pub fn coarsened(&self) -> Result<Self> {
        let mut v: Vec<f64> = self.values.iter().step_by(2).copied().collect();
        if *v.last().unwrap() != 1.0 {
            v.push(1.0);
        }
        Self::checked(v, LadderPolicy::Explicit)
    }

    /// Midpoints inserted between neighbouring rungs.
    pub fn refined(&self) -> Result<Self> {
        let mut v = Vec::with_capacity(2 * self.values.len());
        for w in self.values.windows(2) {
            v.push(w[0]);
            v.push(0.5 * (w[0] + w[1]));
        }
        v.push(1.0);
        Self::checked(v, LadderPolicy::Explicit)
    }
}

impl Default for TemperatureLadder {
    /// 101 rungs `(i/100)^5`.
    fn default() -> Self {
        Self::power(100, 5.0).expect("default ladder is valid")
    }
}
