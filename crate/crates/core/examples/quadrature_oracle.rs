//! Tensor-grid quadrature as an independent check on the closed form,
//! including grid refinement.
//!
//! cargo run --release --example quadrature_oracle

use model_evidence::harness::{BenchModel, NormalGammaDesign};
use model_evidence::models::AnalyticEvidence;
use model_evidence::oracles::{quadrature, refined_quadrature, QuadratureGrid, DEFAULT_PANELS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let models = NormalGammaDesign::seeded_instance().models()?;
    let BenchModel::NormalGamma(m) = &models[0].model else {
        unreachable!()
    };
    let exact = m.analytic_log_evidence()?;
    // Coarse grids lose a little prior mass; accept that while watching convergence.
    let mut grid = QuadratureGrid::normal_gamma(m, 4)?;
    grid.mass_tolerance = 1e-3;
    for _ in 0..4 {
        let r = quadrature(m, &grid, 1.0)?;
        println!(
            "{:>8} nodes: {:.10}  error {:.2e}",
            r.nodes,
            r.log_evidence,
            r.log_evidence - exact
        );
        grid = grid.doubled();
        grid.mass_tolerance = 1e-3;
    }
    let start = QuadratureGrid::normal_gamma(m, DEFAULT_PANELS)?;
    let r = refined_quadrature(m, &start, 1e-8, 1 << 22)?;
    println!(
        "refined ({} nodes): {:.10}  exact {exact:.10}",
        r.nodes, r.log_evidence
    );
    println!(
        "posterior mean (mu, tau) = ({:.5}, {:.5})",
        r.mean[0], r.mean[1]
    );
    Ok(())
}
