use crate::error::{EvidenceError, Result};

/// One-pass (Welford) mean and variance accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> Result<f64> {
        if self.count == 0 {
            return Err(EvidenceError::EmptySequence);
        }
        Ok(self.mean)
    }

    /// Sample variance with the `n - 1` divisor.
    pub fn variance(&self) -> Result<f64> {
        if self.count < 2 {
            return Err(EvidenceError::TooFewObservations(self.count));
        }
        Ok(self.m2 / (self.count - 1) as f64)
    }

    pub fn std_dev(&self) -> Result<f64> {
        self.variance().map(f64::sqrt)
    }

    /// Standard error of the mean, `sd / sqrt(n)`.
    pub fn std_error(&self) -> Result<f64> {
        Ok(self.std_dev()? / (self.count as f64).sqrt())
    }
}

impl FromIterator<f64> for RunningMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = RunningMoments::new();
        for x in iter {
            m.push(x);
        }
        m
    }
}

impl Extend<f64> for RunningMoments {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.push(x);
        }
    }
}

/// Convenience wrapper returning `(mean, variance, count)`.
pub fn running_moments<I: IntoIterator<Item = f64>>(values: I) -> Result<(f64, f64, usize)> {
    let m: RunningMoments = values.into_iter().collect();
    Ok((m.mean()?, m.variance()?, m.count()))
}
