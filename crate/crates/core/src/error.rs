//! Error type shared by all solver modules.

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the solver library.
///
/// Numerical routines never clamp silently: a state outside the admissible
/// region, a radius at or inside the horizon, or a root-find that cannot be
/// bracketed all surface as errors.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A radius at or inside the horizon `r <= 2M`, or outside the domain of
    /// the object being evaluated.
    #[error("radius {r} outside the valid domain ({detail})")]
    Domain { r: f64, detail: String },

    /// A fluid state outside the admissible region (`rho > 0`, `|eps v| < 1`).
    #[error("inadmissible fluid state rho={rho}, v={v}: {detail}")]
    Inadmissible { rho: f64, v: f64, detail: String },

    /// Model parameters that violate the family constraints
    /// (`eps >= 0`, `0 < k`, `eps k <= 1`, `m >= 0`).
    #[error("invalid model parameters: {0}")]
    Parameters(String),

    /// A query that contradicts the structure of the object
    /// (e.g. asking a smooth orbit for its shock position).
    #[error("invalid query: {0}")]
    Query(String),

    /// A wave-curve evaluation outside its half-curve
    /// (e.g. a shock branch queried at a density below the base density).
    #[error("wave curve queried off its branch: {0}")]
    OffBranch(String),

    /// A root could not be bracketed or an iteration failed to converge.
    #[error("numerical failure: {0}")]
    Numerics(String),

    /// Configuration rejected before any computation (missing fields,
    /// inconsistent grid, violated stability condition).
    #[error("invalid configuration: {0}")]
    Config(String),
}
