use thiserror::Error;

use crate::Q;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("operands were built from different configurations")]
    ConfigMismatch,
    #[error("indeterminate at working precision: {0}")]
    Indeterminate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("element is not divisible by w - [u]: {0}")]
    NotDivisible(String),
    #[error("root lies outside the configured field (Newton slope {slope})")]
    OutsideField { slope: Q },
    #[error("unsupported by this backend: {0}")]
    Unsupported(String),
    #[error("norm diverges: {0}")]
    Divergent(String),
    #[error("value group condition fails: {0}")]
    ValueGroup(String),
    #[error("no generator dominates leading index {0}")]
    NoDominatingGenerator(String),
    #[error("no unit of the required norm exists: {0}")]
    NormScalingUnavailable(String),
    #[error("iteration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("element not generated by witness set: {0}")]
    NotGenerated(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid_config",
            Error::ConfigMismatch => "config_mismatch",
            Error::Indeterminate(_) => "indeterminate",
            Error::Precondition(_) => "precondition",
            Error::NotDivisible(_) => "not_divisible",
            Error::OutsideField { .. } => "outside_field",
            Error::Unsupported(_) => "unsupported",
            Error::Divergent(_) => "divergent",
            Error::ValueGroup(_) => "value_group",
            Error::NoDominatingGenerator(_) => "no_dominating_generator",
            Error::NormScalingUnavailable(_) => "norm_scaling_unavailable",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::NotGenerated(_) => "not_generated",
            Error::Internal(_) => "internal",
        }
    }

    pub(crate) fn indeterminate(msg: impl Into<String>) -> Self {
        Error::Indeterminate(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
