//! Ground truth that does not share code paths with the estimators.

pub mod conjugate;
pub mod quadrature;

pub use conjugate::{conjugate_posterior_moments, PosteriorMoments};
pub use quadrature::{
    gauss_legendre, quadrature, quadrature_log_evidence, refined_quadrature, Axis, Coordinate,
    QuadratureGrid, QuadratureResult, Rule, DEFAULT_PANELS,
};
