use thiserror::Error;

/// Errors raised by the numerical core, the samplers and the estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvidenceError {
    #[error("empty sequence")]
    EmptySequence,

    #[error("NaN encountered in {0}")]
    NotANumber(&'static str),

    #[error("variance requires at least two observations, got {0}")]
    TooFewObservations(usize),

    #[error("matrix not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("precision must be positive")]
    NonPositivePrecision,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("chain initialized outside support")]
    OutsideSupport,

    #[error("saddle or ridge at convergence")]
    SaddleOrRidge,

    #[error("Newton iteration did not converge after {iterations} iterations (gradient norm {gradient_norm:e})")]
    NoConvergence {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("degenerate posterior ordinate; increase the number of samples")]
    DegenerateOrdinate,

    #[error("non-finite importance weight in replicate {replicate} at temperature {temperature}")]
    NonFiniteWeight { replicate: usize, temperature: f64 },

    #[error("non-finite log-likelihood at draw {0}")]
    NonFiniteLikelihood(usize),

    #[error("estimate is not finite")]
    NonFiniteEstimate,

    #[error("temperature ladder is not monotone or has wrong endpoints: {0}")]
    BadLadder(String),

    #[error("grid truncation too aggressive (prior mass {mass})")]
    GridTruncation { mass: f64 },

    #[error("quadrature did not settle to {tolerance:e} nats within {nodes} nodes")]
    QuadratureNotConverged { nodes: usize, tolerance: f64 },

    #[error("moment {0} is undefined for these hyperparameters")]
    UndefinedMoment(&'static str),

    #[error("all prior model probabilities are zero")]
    ZeroPriors,

    #[error("column {0} has zero standard deviation")]
    ConstantColumn(String),

    #[error("model does not provide capability: {0}")]
    MissingCapability(&'static str),
}

pub type Result<T> = std::result::Result<T, EvidenceError>;
