use thiserror::Error;

/// Errors raised by the fractal calculus operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractal order must satisfy 0 < alpha <= 1, got {0}")]
    InvalidOrder(f64),

    #[error("fractal order mismatch: {left} vs {right}")]
    OrderMismatch { left: f64, right: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("series centers differ: {left} vs {right}")]
    CenterMismatch { left: f64, right: f64 },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("series term {term} overflows")]
    Range { term: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite function value at x = {at} (step {step})")]
    Evaluation { at: f64, step: f64 },

    #[error("degenerate Hölder fit: {0}")]
    DegenerateFit(String),

    #[error("unsupported quadrature backend: {0}")]
    UnsupportedBackend(String),

    #[error("insufficient data: need {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("a priori bound unavailable for contraction constant {0} (needs 0 <= L < 1)")]
    BoundUnavailable(f64),

    #[error("local fractional derivative vanishes at iterate x = {iterate}")]
    DerivativeVanishes { iterate: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
