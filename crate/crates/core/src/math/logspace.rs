//! Log-space arithmetic. Every likelihood, prior density and importance
//! weight in this crate is carried as a natural logarithm; `-inf` encodes zero.

use crate::error::{EvidenceError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Natural logarithm of a nonnegative quantity. Never NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            Err(EvidenceError::NotANumber("log value"))
        } else {
            Ok(LogValue(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `exp` of the stored value; may overflow to `inf` or underflow to 0.
    pub fn to_linear(self) -> f64 {
        self.0.exp()
    }
}

impl TryFrom<f64> for LogValue {
    type Error = EvidenceError;
    fn try_from(v: f64) -> Result<Self> {
        LogValue::new(v)
    }
}

impl From<LogValue> for f64 {
    fn from(v: LogValue) -> f64 {
        v.0
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `log Σ exp(vᵢ)`, shifting by the maximum before exponentiating.
pub fn log_sum_exp(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(EvidenceError::EmptySequence);
    }
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        if v.is_nan() {
            return Err(EvidenceError::NotANumber("log_sum_exp input"));
        }
        if v > max {
            max = v;
        }
    }
    if max == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    if max == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    Ok(max + sum.ln())
}

/// `log((1/N) Σ exp(vᵢ))`.
pub fn log_mean_exp(values: &[f64]) -> Result<f64> {
    Ok(log_sum_exp(values)? - (values.len() as f64).ln())
}

/// `log(exp(a) + exp(b))` for two terms.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `log(exp(a) - exp(b))` for `a >= b`.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    a + (-(b - a).exp()).ln_1p()
}
