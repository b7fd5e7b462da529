use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factorization effort budget of {budget} steps exceeded")]
    FactorizationTimeout { budget: u64 },

    #[error("zero input where a nonzero value is required")]
    ZeroInput,

    #[error("bad modulus {0}: expected an odd prime")]
    BadModulus(String),

    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: String, modulus: String },

    #[error("{0} is not squarefree")]
    NotSquarefree(String),

    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("form is degenerate (determinant zero)")]
    Degenerate,

    #[error("scaling factor must be nonzero")]
    ZeroScale,

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("codimension-0 complement test requires both concrete forms")]
    MissingForms,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("no witness found within the configured bounds")]
    NotFoundWithinBounds,

    #[error("classifications disagree: {0}")]
    Disagreement(String),

    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },
}

impl Error {
    /// Stable snake_case identifier for machine-readable output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::FactorizationTimeout { .. } => "factorization_timeout",
            Error::ZeroInput => "zero_input",
            Error::BadModulus(_) => "bad_modulus",
            Error::NotCoprime { .. } => "not_coprime",
            Error::NotSquarefree(_) => "not_squarefree",
            Error::BadDimension(_) => "bad_dimension",
            Error::NotSymmetric => "not_symmetric",
            Error::Degenerate => "degenerate",
            Error::ZeroScale => "zero_scale",
            Error::InvalidQuery(_) => "invalid_query",
            Error::MissingForms => "missing_forms",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NotFoundWithinBounds => "not_found_within_bounds",
            Error::Disagreement(_) => "disagreement",
            Error::ParseRational { .. } => "parse_rational",
        }
    }
}
