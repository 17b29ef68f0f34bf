use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to converge or lost its bracket.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The enumerated spectrum does not reach far enough in energy.
    #[error("spectrum cutoff {cutoff} too small: {available} states available, {required} required")]
    CutoffTooSmall { cutoff: f64, available: u64, required: u64 },

    /// Enumeration would exceed the state-count guard.
    #[error("spectrum enumeration would exceed {limit} states")]
    TooManyStates { limit: u64 },

    /// A zero-temperature occupation that does not fill whole shells.
    #[error("{n} particles do not fill a closed shell (nearest closed shells: {below} and {above})")]
    PartialShell { n: u64, below: u64, above: u64 },

    /// A perturbation too large for first-order response.
    #[error("perturbation too large: |dV|/E_F = {max_abs} exceeds {limit}")]
    SmallnessGuard { max_abs: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
