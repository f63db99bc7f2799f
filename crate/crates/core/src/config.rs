//! Experiment configuration: a JSON document selecting a scenario, a grid,
//! a data family, decomposition parameters, and (per scenario) solver or
//! sweep blocks. Configs round-trip through serde exactly; scenario-specific
//! required blocks are validated before a run starts.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RadialGrid;
use crate::propagator::SolverConfig;
use crate::testfn::TestFunctionSpec;
use crate::transforms::{is_dyadic, DecompositionParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Kernels,
    Decompose,
    LinearSweep,
    Evolve,
    Scatter,
    Check,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Kernels => "kernels",
            Scenario::Decompose => "decompose",
            Scenario::LinearSweep => "linear-sweep",
            Scenario::Evolve => "evolve",
            Scenario::Scatter => "scatter",
            Scenario::Check => "check",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "kernels" => Scenario::Kernels,
            "decompose" => Scenario::Decompose,
            "linear-sweep" => Scenario::LinearSweep,
            "evolve" => Scenario::Evolve,
            "scatter" => Scenario::Scatter,
            "check" => Scenario::Check,
            other => return Err(Error::config(format!("unknown scenario `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub r_max: f64,
    pub n: usize,
}

impl GridConfig {
    pub fn build(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.r_max, self.n)
    }
}

/// Decomposition parameters with N optional: when absent, scenarios that
/// need it derive N from δ₀ via the tail scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default = "default_epsilon0")]
    pub epsilon0: f64,
    #[serde(default)]
    pub n_dyadic: Option<f64>,
    #[serde(default = "default_s0")]
    pub s0: f64,
    #[serde(default = "default_delta0")]
    pub delta0: f64,
}

fn default_alpha() -> f64 {
    1.0
}
fn default_epsilon0() -> f64 {
    1.0
}
fn default_s0() -> f64 {
    0.9
}
fn default_delta0() -> f64 {
    0.1
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            alpha: default_alpha(),
            beta: 0.0,
            epsilon0: default_epsilon0(),
            n_dyadic: None,
            s0: default_s0(),
            delta0: default_delta0(),
        }
    }
}

impl ParamsConfig {
    /// Resolve into full decomposition parameters with the given N.
    pub fn with_n(&self, n_dyadic: f64) -> DecompositionParams {
        DecompositionParams {
            alpha: self.alpha,
            beta: self.beta,
            epsilon0: self.epsilon0,
            n_dyadic,
            s0: self.s0,
            delta0: self.delta0,
        }
    }

    /// Parameters for operations that do not consume N.
    pub fn base(&self) -> DecompositionParams {
        self.with_n(self.n_dyadic.unwrap_or(1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Dyadic thresholds for the linear-estimate sweep (≥ 3 entries).
    #[serde(default)]
    pub n_list: Option<Vec<f64>>,
    /// Bands for the inside-region propagation sweep.
    #[serde(default)]
    pub inside_k_list: Option<Vec<i32>>,
    /// Bands for the banded-remainder decay sweep.
    #[serde(default)]
    pub remainder_k_list: Option<Vec<i32>>,
    /// Region-mask δ for the inside-region sweep.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Horizon of the sweep evolutions.
    #[serde(default = "default_sweep_t_end")]
    pub t_end: f64,
    /// Start of the late window for the [δ, T] estimates.
    #[serde(default = "default_late_window")]
    pub late_window_start: f64,
    /// Worker-pool size for concurrent sweep members (default: rayon's).
    #[serde(default)]
    pub workers: Option<usize>,
}

fn default_delta() -> f64 {
    0.25
}
fn default_sweep_t_end() -> f64 {
    8.0
}
fn default_late_window() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub grid: GridConfig,
    pub data: TestFunctionSpec,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub solver: Option<SolverConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    /// Threshold for the S-norm interval-splitting diagnostic.
    #[serde(default = "default_eta")]
    pub eta: f64,
    pub output_dir: PathBuf,
}

fn default_eta() -> f64 {
    1.0
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("config parse error: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.build()?;
        self.data.validate()?;
        if let Some(n) = self.params.n_dyadic {
            if !is_dyadic(n) {
                return Err(Error::config(format!("params.n_dyadic must be dyadic, got {n}")));
            }
        }
        self.params.base().validate()?;
        if !(self.eta > 0.0) {
            return Err(Error::config(format!("eta must be positive, got {}", self.eta)));
        }
        match self.scenario {
            Scenario::Evolve | Scenario::Scatter => {
                let solver = self
                    .solver
                    .as_ref()
                    .ok_or_else(|| Error::config(format!(
                        "scenario `{}` requires the solver block",
                        self.scenario.name()
                    )))?;
                solver.validate()?;
            }
            Scenario::LinearSweep => {
                let sweep = self
                    .sweep
                    .as_ref()
                    .ok_or_else(|| Error::config("scenario `linear-sweep` requires the sweep block".to_string()))?;
                let any = sweep.n_list.is_some()
                    || sweep.inside_k_list.is_some()
                    || sweep.remainder_k_list.is_some();
                if !any {
                    return Err(Error::config(
                        "sweep block needs at least one of n_list, inside_k_list, remainder_k_list"
                            .to_string(),
                    ));
                }
                if let Some(ns) = &sweep.n_list {
                    if ns.len() < 3 {
                        return Err(Error::config(format!(
                            "sweep.n_list needs ≥ 3 dyadic entries, got {}",
                            ns.len()
                        )));
                    }
                    for &n in ns {
                        if !is_dyadic(n) {
                            return Err(Error::config(format!("sweep.n_list entry {n} is not dyadic")));
                        }
                    }
                }
                if !(sweep.delta > 0.0) || !(sweep.t_end > 0.0) {
                    return Err(Error::config("sweep delta and t_end must be positive".to_string()));
                }
            }
            Scenario::Kernels | Scenario::Decompose | Scenario::Check => {}
        }
        Ok(())
    }
}
