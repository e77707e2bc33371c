use crate::error::{EvidenceError, Result};
use crate::math::log_sum_exp;

/// `log BF_ij = log π(y|m_i) − log π(y|m_j)`.
pub fn log_bayes_factor(log_evidence_i: f64, log_evidence_j: f64) -> Result<f64> {
    if !(log_evidence_i.is_finite() && log_evidence_j.is_finite()) {
        return Err(EvidenceError::NonFiniteEstimate);
    }
    Ok(log_evidence_i - log_evidence_j)
}

pub fn bayes_factor(log_evidence_i: f64, log_evidence_j: f64) -> Result<f64> {
    log_bayes_factor(log_evidence_i, log_evidence_j).map(f64::exp)
}

/// Posterior model probabilities from log evidences and prior model
/// probabilities, normalized with log-sum-exp.
pub fn posterior_model_probabilities(log_evidences: &[f64], priors: &[f64]) -> Result<Vec<f64>> {
    if log_evidences.len() != priors.len() {
        return Err(EvidenceError::DimensionMismatch {
            expected: log_evidences.len(),
            actual: priors.len(),
        });
    }
    if log_evidences.is_empty() {
        return Err(EvidenceError::EmptySequence);
    }
    if priors.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(EvidenceError::InvalidArgument(
            "prior model probabilities must be nonnegative".into(),
        ));
    }
    if priors.iter().all(|&p| p == 0.0) {
        return Err(EvidenceError::ZeroPriors);
    }
    let logs: Vec<f64> = log_evidences
        .iter()
        .zip(priors)
        .map(|(e, p)| {
            if *p == 0.0 {
                f64::NEG_INFINITY
            } else {
                e + p.ln()
            }
        })
        .collect();
    let norm = log_sum_exp(&logs)?;
    Ok(logs.iter().map(|l| (l - norm).exp()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_evidence_gives_one() {
        assert_eq!(bayes_factor(-10.0, -10.0).unwrap(), 1.0);
        for p in posterior_model_probabilities(&[-5.0, -5.0], &[0.5, 0.5]).unwrap() {
            assert!((p - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_prior_wins() {
        let p = posterior_model_probabilities(&[-900.0, -1.0], &[1.0, 0.0]).unwrap();
        assert_eq!(p, vec![1.0, 0.0]);
    }

    #[test]
    fn all_zero_priors_fail() {
        assert_eq!(
            posterior_model_probabilities(&[0.0, 0.0], &[0.0, 0.0]).unwrap_err(),
            EvidenceError::ZeroPriors
        );
    }

    #[test]
    fn two_model_probability_is_bf_over_one_plus_bf() {
        let bf: f64 = 13.96;
        let p = posterior_model_probabilities(&[bf.ln() - 257.0, -257.0], &[0.5, 0.5]).unwrap();
        assert!((p[0] - bf / (1.0 + bf)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn antisymmetric(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            prop_assume!((a - b).abs() < 600.0);
            let prod = bayes_factor(a, b).unwrap() * bayes_factor(b, a).unwrap();
            prop_assert!((prod - 1.0).abs() < 1e-12);
        }

        #[test]
        fn probabilities_sum_to_one(
            pairs in prop::collection::vec((-2000.0f64..0.0, 0.0f64..1.0), 1..12)
        ) {
            let e: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let mut pr: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            prop_assume!(pr.iter().any(|&p| p > 0.0));
            let s: f64 = pr.iter().sum();
            pr.iter_mut().for_each(|p| *p /= s);
            let post = posterior_model_probabilities(&e, &pr).unwrap();
            prop_assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
