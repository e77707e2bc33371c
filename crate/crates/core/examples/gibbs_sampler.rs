//! Gibbs sampling of the conjugate normal-gamma model, checked against the
//! analytic posterior moments.
//!
//! cargo run --release --example gibbs_sampler

use model_evidence::harness::{BenchModel, NormalGammaDesign};
use model_evidence::math::{RngStream, RunningMoments};
use model_evidence::models::TemperedGibbs;
use model_evidence::oracles::conjugate_posterior_moments;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let models = NormalGammaDesign::seeded_instance().models()?;
    let BenchModel::NormalGamma(m) = &models[0].model else {
        unreachable!()
    };
    let mut rng = RngStream::new(1, 0);
    let mut state = vec![0.0, 1.0];
    let (mut mu, mut tau) = (RunningMoments::default(), RunningMoments::default());
    for it in 0..100_000 {
        m.gibbs_sweep(&mut state, &mut rng)?;
        if it >= 1_000 {
            mu.push(state[0]);
            tau.push(state[1]);
        }
    }
    let exact = conjugate_posterior_moments(m)?;
    println!(
        "E[mu]  sampled {:.5}  exact {:.5}",
        mu.mean().unwrap_or(f64::NAN),
        exact.mean_mu
    );
    println!(
        "V[mu]  sampled {:.6}  exact {:.6}",
        mu.variance().unwrap_or(f64::NAN),
        exact.var_mu
    );
    println!(
        "E[tau] sampled {:.5}  exact {:.5}",
        tau.mean().unwrap_or(f64::NAN),
        exact.mean_tau
    );
    println!(
        "V[tau] sampled {:.6}  exact {:.6}",
        tau.variance().unwrap_or(f64::NAN),
        exact.var_tau
    );
    Ok(())
}
