//! JSON inputs. Every struct rejects unknown keys.

use std::path::{Path, PathBuf};

use cfs45::kinematics::{ChainModel, Obstacle};
use cfs45::sim::{Archetype, Mode, Scenario};
use cfs45::spline::{JointLimits, JointState};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_RATE_HZ: f64 = 1000.0;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// One limit set for every joint, or one per joint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LimitsSpec {
    Shared(JointLimits),
    PerJoint(Vec<JointLimits>),
}

impl Default for LimitsSpec {
    fn default() -> Self {
        LimitsSpec::Shared(JointLimits::xarm6())
    }
}

impl LimitsSpec {
    pub fn expand(&self, dof: usize) -> Result<Vec<JointLimits>> {
        let v = match self {
            LimitsSpec::Shared(l) => vec![*l; dof],
            LimitsSpec::PerJoint(v) if v.len() == dof => v.clone(),
            LimitsSpec::PerJoint(v) => {
                return Err(CliError::Config(format!("{} limit sets given for {dof} joints", v.len())));
            }
        };
        for l in &v {
            l.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(v)
    }
}

/// Boundary conditions for `generate`. Without `final` the request is an
/// emergency stop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateRequest {
    #[serde(default)]
    pub limits: LimitsSpec,
    pub initial: Vec<JointState>,
    #[serde(default, rename = "final")]
    pub fin: Option<Vec<JointState>>,
    #[serde(default)]
    pub delta_c: Option<f64>,
    #[serde(default)]
    pub sample_rate_hz: Option<f64>,
}

/// Scene and knobs for `convert`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvertConfig {
    /// Needed whenever `obstacles` is non-empty.
    #[serde(default)]
    pub model: Option<ChainModel>,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub limits: LimitsSpec,
    #[serde(default = "default_period")]
    pub period: f64,
    #[serde(default)]
    pub d_max: Option<f64>,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub delta_c: Option<f64>,
    #[serde(default = "yes")]
    pub interpolate: bool,
    /// Certification step; `period / 10` when absent.
    #[serde(default)]
    pub cert_dt: Option<f64>,
    #[serde(default)]
    pub sample_rate_hz: Option<f64>,
}

impl Default for ConvertConfig {
    fn default() -> Self {
        Self {
            model: None,
            obstacles: Vec::new(),
            limits: LimitsSpec::default(),
            period: default_period(),
            d_max: None,
            threshold: None,
            delta_c: None,
            interpolate: true,
            cert_dt: None,
            sample_rate_hz: None,
        }
    }
}

fn default_period() -> f64 {
    0.01
}

fn yes() -> bool {
    true
}

/// Where a scenario comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioSource {
    /// Random instance of a built-in family, drawn from the run seed.
    Archetype(Archetype),
    /// Scenario file, relative to the sweep file.
    File(PathBuf),
    Inline(Box<Scenario>),
}

/// Batch definition for `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenarios: Vec<ScenarioSource>,
    pub periods_ms: Vec<f64>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub mode: Option<Mode>,
    /// Offline path plus conversion instead of the online loop.
    #[serde(default, rename = "static")]
    pub static_pipeline: bool,
    #[serde(default)]
    pub max_sim_time: Option<f64>,
}

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub period_ms: Option<f64>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub delta_c: Option<f64>,
    pub d_max: Option<f64>,
    pub fixed_clock: bool,
}

impl Overrides {
    pub fn apply(&self, s: &mut Scenario) -> Result<()> {
        if let Some(ms) = self.period_ms {
            if !(ms > 0.0) {
                return Err(CliError::Config("--period-ms must be positive".into()));
            }
            s.period = ms * 1e-3;
        }
        if let Some(m) = self.mode {
            s.mode = m;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(dc) = self.delta_c {
            if !(dc > 0.0) {
                return Err(CliError::Config("--delta-c must be positive".into()));
            }
            s.planner.delta_c = Some(dc);
        }
        s.fixed_clock |= self.fixed_clock;
        Ok(())
    }
}

impl ScenarioSource {
    /// Concrete scenario for one run.
    pub fn resolve(&self, base: &Path, seed: u64, period: f64, mode: Option<Mode>) -> Result<Scenario> {
        Ok(match self {
            ScenarioSource::Archetype(a) => a.generate(seed, period, mode.unwrap_or_default()),
            ScenarioSource::File(p) => {
                let mut s: Scenario = read_json(&base.join(p))?;
                (s.seed, s.period) = (seed, period);
                s.mode = mode.unwrap_or(s.mode);
                s
            }
            ScenarioSource::Inline(s) => {
                let mut s = (**s).clone();
                (s.seed, s.period) = (seed, period);
                s.mode = mode.unwrap_or(s.mode);
                s
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            ScenarioSource::Archetype(a) => a.name().to_string(),
            ScenarioSource::File(p) => p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
            ScenarioSource::Inline(s) => if s.name.is_empty() { "inline".into() } else { s.name.clone() },
        }
    }
}
