use crate::error::{EvidenceError, Result};
use crate::models::NormalGammaModel;
use serde::{Deserialize, Serialize};

/// Exact marginal posterior moments of a normal-gamma model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorMoments {
    pub mean_mu: f64,
    pub var_mu: f64,
    pub mean_tau: f64,
    pub var_tau: f64,
}

/// `τ | y ~ Ga(aₙ, bₙ)`; `μ | y` is Student-t with `2aₙ` degrees of freedom,
/// location `μₙ` and squared scale `bₙ/(aₙτₙ)`, so `Var μ = bₙ/(τₙ(aₙ − 1))`.
pub fn conjugate_posterior_moments(model: &NormalGammaModel) -> Result<PosteriorMoments> {
    let p = model.posterior();
    if !(p.a_n > 1.0) {
        return Err(EvidenceError::UndefinedMoment("Var[mu]"));
    }
    Ok(PosteriorMoments {
        mean_mu: p.mu_n,
        var_mu: p.b_n / (p.tau_n * (p.a_n - 1.0)),
        mean_tau: p.a_n / p.b_n,
        var_tau: p.a_n / (p.b_n * p.b_n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::RngStream;
    use crate::oracles::quadrature::{quadrature, QuadratureGrid};

    #[test]
    fn empty_data_returns_prior_moments() {
        let m = NormalGammaModel::new(vec![], 1.5, 2.0, 3.0, 4.0).unwrap();
        let mo = conjugate_posterior_moments(&m).unwrap();
        assert_eq!(mo.mean_mu, 1.5);
        assert_eq!(mo.mean_tau, 0.75);
        assert_eq!(mo.var_tau, 3.0 / 16.0);
        assert_eq!(mo.var_mu, 4.0 / (2.0 * 2.0));
    }

    #[test]
    fn undefined_variance_is_named() {
        let m = NormalGammaModel::new(vec![], 0.0, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(
            conjugate_posterior_moments(&m).unwrap_err().to_string(),
            "moment Var[mu] is undefined for these hyperparameters"
        );
    }

    #[test]
    fn agrees_with_quadrature_moments() {
        let mut rng = RngStream::new(31, 0);
        let y = (0..10).map(|_| rng.normal(-0.4, 0.8)).collect();
        let m = NormalGammaModel::new(y, 0.0, 1.0, 2.0, 2.0).unwrap();
        let mo = conjugate_posterior_moments(&m).unwrap();
        let q = quadrature(&m, &QuadratureGrid::normal_gamma(&m, 24).unwrap(), 1.0).unwrap();
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(q.mean[0], mo.mean_mu) < 1e-5);
        assert!(rel(q.variance[0], mo.var_mu) < 1e-5);
        assert!(rel(q.mean[1], mo.mean_tau) < 1e-5);
        assert!(rel(q.variance[1], mo.var_tau) < 1e-5);
    }
}
