use thiserror::Error;

/// Errors raised by the library. Variants map onto the failure classes the
/// experiment runner turns into exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside the domain of {gauge}")]
    Domain { gauge: String, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("gauge {0} does not support this operation")]
    UnsupportedGauge(String),

    #[error("curve has no point at parameter {0}")]
    NoPoint(f64),

    #[error("disc {index} reaches outside the curve domain")]
    PartialDomain { index: usize },

    #[error("disc is not in the asymptotic regime: {0}")]
    NotInAsymptoticRegime(String),

    #[error("disc center lies outside every Stolz angle S(1, c) with c <= 100")]
    NotStolz,

    #[error("evaluation point {re} + {im}i is a zero or pole")]
    SingularPoint { re: f64, im: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisFail(String),

    #[error("precondition violated: {0}")]
    PreconditionFail(String),

    #[error("samples inside the exceptional set: {0:?}")]
    InsideExceptionalSet(Vec<usize>),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
