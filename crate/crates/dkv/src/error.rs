//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of spectrum construction and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters outside the validity domain (e.g. `B/2 <= 1/4`, nonpositive step).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Requested level does not exist for these couplings.
    #[error("no bound level n = {n} for these parameters")]
    MissingLevel { n: usize },

    /// A quantity that must be real and inside its physical window is not.
    #[error("non-physical root data: {0}")]
    NonPhysicalRoots(String),

    /// Potential sample too large for a stable discretization.
    #[error("potential value {value:e} at x = {at} exceeds the solver bound")]
    UnboundedPotential { value: f64, at: f64 },

    /// An iterative routine ran out of its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),
}
