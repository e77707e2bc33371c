//! Markov chain machinery: a chain driver plus tempered kernels.

pub mod chain;
pub mod metropolis;

pub use chain::{run_chain, ChainConfig, ChainOutput, StepStats};
pub use metropolis::{
    rw_metropolis_step, single_site_metropolis, tempered_log_target, GibbsKernel, RandomWalkKernel,
    TemperedKernel, TemperedKernelConfig,
};
