use thiserror::Error;

/// Errors produced by the numerical kernels and the geometry built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("boundary point: {0}")]
    Boundary(String),
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    #[error("pole in working range: {0}")]
    Pole(String),
    #[error("bracket (1 - a ln x) not positive on working range: {0}")]
    BracketNonpositive(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("invalid deformation: {0}")]
    InvalidDeformation(String),
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("infeasible target: {0}")]
    Infeasible(String),
    #[error("no normalization: {0}")]
    NoNormalization(String),
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
