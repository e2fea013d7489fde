use thiserror::Error;

/// Errors raised by the exact-arithmetic routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("series is not invertible (zero constant term)")]
    NotInvertible,
    #[error("inner series of a composition must have order at least 1")]
    CompositionDomain,
    #[error("series is not a delta series (order {0:?} instead of 1)")]
    NotDelta(Option<usize>),
    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("pole: m + x = 0 at m = {0}")]
    PoleAtNonpositive(u64),
    #[error("term budget exceeded: {needed} summands requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
