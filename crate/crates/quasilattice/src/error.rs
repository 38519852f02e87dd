//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// Construction-time validation failures (`NotAUnit`, `NotPisot`,
/// `UnsupportedField`, `InvalidIfs`) are distinguished from resource-limit
/// failures (`Intractable`, `BudgetExceeded`) so that callers can map them to
/// different process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// The element is not invertible in the ring of algebraic integers
    /// (its multiplication matrix has determinant other than plus or minus one).
    #[error("not a unit: {0}")]
    NotAUnit(String),

    /// The expansion factor violates the Pisot-unit root pattern: either its
    /// physical modulus is not greater than one, or some internal-plane image
    /// has modulus not less than one.
    #[error("not a Pisot unit: {0}")]
    NotPisot(String),

    /// The requested field cannot support the construction (for example a
    /// cyclotomic order with no internal plane, or a minimal polynomial whose
    /// contracting roots are not complex-conjugate pairs).
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    /// Two elements from different fields were combined.
    #[error("ring elements belong to different fields")]
    FieldMismatch,

    /// The requested Galois automorphism does not exist for this field.
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    /// The iterated function system itself is malformed (empty or duplicate
    /// translation list, non-positive radius, seed rejected in strict mode...).
    #[error("invalid system: {0}")]
    InvalidIfs(String),

    /// Candidate-lattice enumeration would exceed the configured budget.
    #[error("intractable enumeration: lattice size {lattice} exceeds budget {budget}")]
    Intractable { lattice: u128, budget: u64 },

    /// Pattern construction grew past the configured point budget.
    #[error("point budget exceeded: {points} points exceed budget {budget}")]
    BudgetExceeded { points: u64, budget: u64 },

    /// An imported document (CSV/JSON) is malformed.
    #[error("format error: {0}")]
    Format(String),

    /// Filesystem failure while reading or writing artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
