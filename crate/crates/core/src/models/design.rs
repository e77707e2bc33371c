use crate::error::{EvidenceError, Result};
use crate::math::RunningMoments;
use serde::{Deserialize, Serialize};

/// Covariate columns standardized to mean 0 and sample sd 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardized {
    pub names: Vec<String>,
    /// One vector per covariate.
    pub columns: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl Standardized {
    /// Rows `(1, z₁, …, z_d)` with a leading intercept.
    pub fn design_with_intercept(&self) -> Vec<Vec<f64>> {
        let n = self.columns.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| {
                std::iter::once(1.0)
                    .chain(self.columns.iter().map(|c| c[i]))
                    .collect()
            })
            .collect()
    }
}

/// Centers and scales each column (sample sd, `n − 1` divisor). The
/// intercept is never part of the input; it is added by
/// [`Standardized::design_with_intercept`].
pub fn standardize_covariates(names: &[&str], columns: &[Vec<f64>]) -> Result<Standardized> {
    let mut out = Standardized {
        names: names.iter().map(|s| s.to_string()).collect(),
        columns: Vec::with_capacity(columns.len()),
        means: Vec::with_capacity(columns.len()),
        sds: Vec::with_capacity(columns.len()),
    };
    for (name, col) in names.iter().zip(columns) {
        let m: RunningMoments = col.iter().copied().collect();
        let mean = m.mean()?;
        let sd = m.std_dev()?;
        if !(sd > 0.0) {
            return Err(EvidenceError::ConstantColumn(name.to_string()));
        }
        out.columns
            .push(col.iter().map(|v| (v - mean) / sd).collect());
        out.means.push(mean);
        out.sds.push(sd);
    }
    Ok(out)
}
