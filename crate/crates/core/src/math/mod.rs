//! Deterministic numerical primitives shared by every estimator.

pub mod density;
pub mod linalg;
pub mod logspace;
pub mod moments;
pub mod rng;

pub use linalg::{logdet_spd, solve_spd, Cholesky, SmallMatrix, MAX_DIM};
pub use logspace::{log_add_exp, log_mean_exp, log_sub_exp, log_sum_exp, LogValue};
pub use moments::{running_moments, RunningMoments};
pub use rng::{stream_id, RngStream};
