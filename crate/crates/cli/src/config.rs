//! JSON run configurations.
//!
//! Every physical parameter is explicit; there are no defaults for the model
//! triple (eps, k, mass), so a config always pins the model it runs.

use bhfluid::model::PhysParams;
use bhfluid::{Error, Result};
use serde::Deserialize;

/// The model triple. `mass` is the geometric mass M for eps > 0 and the
/// rescaled mass m for the classical members (eps = 0, where M = eps^2 m
/// degenerates).
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub eps: f64,
    pub k: f64,
    pub mass: f64,
}

impl ParamsConfig {
    /// Select the model-family member from the triple.
    pub fn build(&self) -> Result<PhysParams> {
        if self.eps == 0.0 {
            PhysParams::non_relativistic(self.k, self.mass)
        } else if self.eps * self.k == 1.0 {
            PhysParams::stiff(self.eps, self.mass)
        } else if self.mass == 0.0 {
            PhysParams::minkowski(self.eps, self.k)
        } else {
            PhysParams::relativistic(self.eps, self.k, self.mass)
        }
    }
}

/// A primitive state in a config file.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub rho: f64,
    pub v: f64,
}

/// One steady-atlas case: a model plus a base point.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyCase {
    /// Output-file label; defaults to the case index.
    pub label: Option<String>,
    pub params: ParamsConfig,
    pub r0: f64,
    pub rho0: f64,
    pub v0: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyConfig {
    pub cases: Vec<SteadyCase>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiemannConfig {
    pub params: ParamsConfig,
    pub r0: f64,
    pub left: StateConfig,
    pub right: StateConfig,
}

/// Initial data for an evolution: a steady orbit through a base point, or
/// two constant states split at `r_mid`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitConfig {
    Steady { r0: f64, rho0: f64, v0: f64 },
    Riemann { left: StateConfig, right: StateConfig, r_mid: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub params: ParamsConfig,
    pub dr: f64,
    pub dt: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    #[serde(default)]
    pub t0: f64,
    pub t_end: f64,
    /// Van der Corput seed; the --seq-offset flag overrides it.
    #[serde(default)]
    pub seq_offset: u64,
    #[serde(default)]
    pub frozen_fan_only: bool,
    /// 0 keeps only the initial and final snapshots.
    #[serde(default)]
    pub snapshot_every: usize,
    pub init: InitConfig,
}

/// One limit-consistency case.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitCaseConfig {
    /// One of "non_relativistic", "minkowski", "stiff", "non_rel_minkowski".
    pub kind: String,
    /// The small parameter driving the limit (eps^2 or M scale; 0 for stiff).
    pub small: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsConfig {
    pub base: ParamsConfig,
    pub cases: Vec<LimitCaseConfig>,
}

/// Read and parse a config file; both failures are configuration errors.
pub fn load<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))
}
