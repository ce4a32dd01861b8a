use thiserror::Error;

/// Failures raised by the construction and verification kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("time {t} outside tabulated range [{lo}, {hi}]")]
    OutOfTableRange { t: f64, lo: f64, hi: f64 },
    #[error("no positive-definite metric: gamma={gamma}, |beta|={beta_abs}")]
    NoMetric { gamma: f64, beta_abs: f64 },
    #[error("degenerate weight W^dagger F W = {value:e} at t={t}")]
    DegenerateWeight { t: f64, value: f64 },
    #[error("inconsistent roots: sigma*Q1*Q2*Q3 = {0:e} < 0")]
    InconsistentRoots(f64),
    #[error("root ordering violates case {case}: {detail}")]
    RootOrdering { case: char, detail: String },
    #[error("singular solution family cannot be assembled")]
    SingularFamily,
    #[error("amplitude vanishes at x={x} while C != 0")]
    ZeroCrossing { x: f64 },
    #[error("zero mode not normalizable: {0}")]
    NotNormalizable(String),
    #[error("separation constant mismatch: scale m={scale}, amplitude m={amplitude}")]
    SeparationMismatch { scale: f64, amplitude: f64 },
    #[error("grid too small: n_x={n} but stencil needs {need}")]
    GridTooSmall { n: usize, need: usize },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("blow-up detected at t={t}: max|psi|={max_abs:e}")]
    BlowupDetected { t: f64, max_abs: f64 },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
