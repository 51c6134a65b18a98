use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no samples")]
    NoSamples,

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("unsampled stratum {index}: moments required")]
    UnsampledStratum { index: usize },

    #[error("length mismatch: {left} strata vs {right} counts")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid box on axis {axis}: need 0 <= lower < upper <= 1")]
    InvalidRect { axis: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown integrand `{name}`; available: {available}")]
    UnknownIntegrand { name: String, available: String },

    #[error("variance undefined: need at least 2 essays, got {0}")]
    VarianceUndefined(usize),

    #[error("wall time must be positive, got {0}")]
    NonPositiveTime(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
