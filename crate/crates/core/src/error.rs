//! Error type shared by every algebraic kernel.

use crate::exactalg::Var;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two series in different distinguished variables were combined.
    #[error("ring mismatch: expected series in {expected}, found {found}")]
    RingMismatch { expected: Var, found: Var },

    /// Inversion of an element whose leading part is not a unit.
    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// A precondition on an operation was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A coefficient was requested beyond the achieved truncation order.
    /// Raised instead of silently returning a wrong residue.
    #[error("insufficient precision in {var}: coefficient of exponent {requested} requested, series only known below order {achieved}")]
    InsufficientPrecision {
        var: Var,
        requested: i64,
        achieved: i64,
    },

    /// Division by a quantity that must not vanish in the valid range.
    #[error("division error: {0}")]
    DivisionError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
