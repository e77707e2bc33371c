pub mod error;
pub mod estimators;
pub mod harness;
pub mod math;
pub mod models;
pub mod oracles;
pub mod samplers;

pub use error::{EvidenceError, Result};
