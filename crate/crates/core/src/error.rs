use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error(
        "wavefunction amplitude at the grid edge is {ratio:.3e} of the peak \
         (limit 1e-6); widen the domain"
    )]
    BoundaryViolation { ratio: f64 },

    #[error("norm invariant broken: |norm - 1| = {drift:.3e}")]
    NormInvariant { drift: f64 },

    #[error("degenerate support: {found} nodes above the fit threshold, need {need}")]
    DegenerateSupport { found: usize, need: usize },

    #[error("Re(omega) = {re:.6e} >= 0: Gaussian state is not normalizable")]
    NonNormalizable { re: f64 },

    #[error("closed-form denominator vanished at t = {t:.6e}")]
    Singularity { t: f64 },

    #[error("integration diverged at step {step}")]
    Instability { step: usize },

    #[error("no stationary limit: lambda = 0 with kappa >= 0 (unobserved free/unstable case)")]
    NoStationaryLimit,

    #[error("empty measurement record")]
    EmptyRecord,

    #[error("norm drift {drift:.3e} exceeded 1e-3 in a single step (step {step})")]
    NormDriftExceeded { step: usize, drift: f64 },

    #[error("configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
