//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Variants distinguish the
//! failure classes callers are expected to branch on: precondition violations
//! ([`Error::Domain`], [`Error::Range`]), resource guards
//! ([`Error::Capacity`], [`Error::Overflow`]), numerical trouble
//! ([`Error::Tolerance`], [`Error::NonConvergence`]), and asserted
//! inequalities that measured false ([`Error::AssertionFailed`]).

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes shared by all modules.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An argument violates a mathematical precondition (e.g. `u <= 1` where
    /// a logarithm of a logarithm is needed).
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument is structurally valid but outside the supported range of
    /// a table or window (e.g. evaluating past a table's `u_max`).
    #[error("range error: {0}")]
    Range(String),

    /// A requested enumeration or sieve exceeds the configured budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A construction could not meet its accuracy target.
    #[error("tolerance not met: {0}")]
    Tolerance(String),

    /// An adaptive quadrature failed to stabilize within its refinement
    /// budget.
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    /// Integer arithmetic would overflow the machine word.
    #[error("integer overflow: {0}")]
    Overflow(String),

    /// Inputs are inconsistent with each other (e.g. a well-spaced set lying
    /// outside the stated interval).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An asserted inequality was measured false.
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
}
