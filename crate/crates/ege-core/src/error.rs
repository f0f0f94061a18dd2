//! Error type shared by all modules.

use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix orders do not match the operation's requirements.
    DimensionMismatch { expected: usize, got: usize },
    /// An argument lies outside the mathematical domain of the operation.
    Domain(&'static str),
    /// The operation is defined but not supported at the requested size.
    Unsupported(&'static str),
    /// An exact-enumeration oracle would exceed its step budget.
    BudgetExceeded { steps: u128, budget: u128 },
    /// An iterative algorithm did not converge within its sweep budget.
    NotConverged,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected order {expected}, got {got}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::BudgetExceeded { steps, budget } => {
                write!(f, "enumeration budget exceeded: {steps} steps > budget {budget}")
            }
            Error::NotConverged => write!(f, "iteration did not converge"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
