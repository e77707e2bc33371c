//! Evidence estimators and model-comparison arithmetic.

pub mod ais;
pub mod chib;
pub mod comparison;
pub mod estimate;
pub mod harmonic;
pub mod ladder;
pub mod laplace;
pub mod nested;
pub mod power;

pub use ais::{ais, ais_log_weights, weight_degeneracy, AisConfig, AisRun};
pub use chib::{chib, ChibConfig};
pub use comparison::{bayes_factor, log_bayes_factor, posterior_model_probabilities};
pub use estimate::{Diagnostics, EvidenceEstimate, Method, Provenance, RungSummary};
pub use harmonic::harmonic_mean;
pub use ladder::{LadderPolicy, TemperatureLadder};
pub use laplace::{laplace, laplace_at, laplace_at_map, newton_mode, NewtonConfig};
pub use nested::{nested_sampling, ConstrainedMove, NestedConfig, NestedState};
pub use power::{power_posteriors, trapezoid, PowerPosteriorConfig, WarmStart};
