use thiserror::Error;

/// Errors produced by the numerical kernels, samplers and I/O front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series did not reach tolerance {tol:e} within {max_terms} terms")]
    NonConvergence { tol: f64, max_terms: usize },

    #[error("theta = {theta} is not supported here: {requirement}")]
    UnsupportedTheta { theta: f64, requirement: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate state: k = 0 is absorbing")]
    DegenerateState,

    #[error("exceedance set is empty")]
    NoExceedance,

    #[error("regression is degenerate (R^2 = {r_squared:.4}, {n_points} points)")]
    FitDegenerate { r_squared: f64, n_points: usize },

    #[error("adaptive quadrature exceeded its budget (estimated error {error:e})")]
    QuadratureFailure { error: f64 },

    #[error("spectral tail {tail:e} at the Nyquist wavenumber exceeds 1e-10")]
    AliasWarning { tail: f64 },

    #[error("grids do not match")]
    GridMismatch,

    #[error("{got} replicas supplied, at least {needed} required")]
    InsufficientReplicas { got: usize, needed: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("check failed: {0}")]
    CheckFailure(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
