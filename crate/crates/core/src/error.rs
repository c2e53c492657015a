use std::fmt;

use crate::function::Interval;

/// Errors raised by the pq-calculus engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PqError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("x = {x} lies outside the domain {domain}")]
    OutsideDomain { x: f64, domain: Interval },

    #[error("evaluation needs {required} but the function is defined on {domain}")]
    DomainTooNarrow {
        required: Interval,
        domain: Interval,
    },

    #[error("range error: {0}")]
    Range(String),

    #[error("non-finite series term at orbit index {index}")]
    NonFiniteTerm { index: i64 },

    #[error("non-finite value {value} at x = {x}")]
    NonFiniteValue { x: f64, value: f64 },

    #[error("limit at x = {at} did not converge: {estimates}")]
    LimitDidNotConverge { at: f64, estimates: LimitEstimates },

    #[error("division by zero at x = {at}")]
    DivisionByZero { at: f64 },

    #[error("inner integral at depth {depth} (x = {at}) ended with status {status:?}")]
    InnerNonConvergence {
        depth: usize,
        at: f64,
        status: crate::series::Status,
    },

    #[error("evaluation fault: {0}")]
    Eval(String),
}

impl PqError {
    /// Stable one-line code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            PqError::InvalidParams(_) => "E_PARAMS",
            PqError::InvalidArgument(_) => "E_ARGUMENT",
            PqError::OutsideDomain { .. } => "E_DOMAIN",
            PqError::DomainTooNarrow { .. } => "E_DOMAIN",
            PqError::Range(_) => "E_RANGE",
            PqError::NonFiniteTerm { .. } => "E_NONFINITE_TERM",
            PqError::NonFiniteValue { .. } => "E_NONFINITE",
            PqError::LimitDidNotConverge { .. } => "E_LIMIT",
            PqError::DivisionByZero { .. } => "E_DIV_ZERO",
            PqError::InnerNonConvergence { .. } => "E_INNER",
            PqError::Eval(_) => "E_EVAL",
        }
    }

    /// Whether the failure is a convergence failure rather than bad input.
    pub fn is_non_convergence(&self) -> bool {
        matches!(
            self,
            PqError::LimitDidNotConverge { .. } | PqError::InnerNonConvergence { .. }
        )
    }
}

/// Last extrapolation window of a failed limit, with the one-sided
/// estimates when both sides were computed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LimitEstimates {
    pub window: Vec<f64>,
    pub from_below: Option<f64>,
    pub from_above: Option<f64>,
}

impl fmt::Display for LimitEstimates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "last window {:?}", self.window)?;
        if let Some(v) = self.from_below {
            write!(f, ", from below {v}")?;
        }
        if let Some(v) = self.from_above {
            write!(f, ", from above {v}")?;
        }
        Ok(())
    }
}

pub type Result<T> = std::result::Result<T, PqError>;
