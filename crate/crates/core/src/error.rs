use thiserror::Error;

/// Failures raised by category operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("not a cone: {0}")]
    NotACone(String),
    #[error("not a cocone: {0}")]
    NotACocone(String),
    #[error("pushout unavailable for this span")]
    PushoutUnavailable,
    #[error("enumeration budget of {limit} candidates exceeded")]
    BudgetExceeded { limit: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error("gluing conditions fail: {0}")]
    Gluing(Box<crate::dpo::GluingReport>),
    #[error("rule leg {leg} is not a {test}")]
    RuleLeg { leg: &'static str, test: &'static str },
}

pub type Result<T, E = CatError> = std::result::Result<T, E>;

pub(crate) fn mismatch(what: impl Into<String>) -> CatError {
    CatError::TypeMismatch(what.into())
}
