//! Inputs of the `simulate` and `maneuver` commands. Both become single-run scenarios.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::scenario::{Check, InitSpec, RunSpec, Scenario, SimSettings, Targets};
use crate::controllers::LawConfig;
use crate::error::Result;
use crate::maneuvers::{PhasePlan, PipelineOptions};
use crate::model::{ModelParams, RadialPotential};

fn default_simulate_name() -> String {
    "simulate".into()
}

fn default_maneuver_name() -> String {
    "maneuver".into()
}

/// One control law from an initial condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "default_simulate_name")]
    pub name: String,
    pub potential: RadialPotential,
    pub params: ModelParams,
    pub init: InitSpec,
    #[serde(default = "zero_law")]
    pub law: LawConfig,
    #[serde(default)]
    pub sim: SimSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<LawConfig>,
    #[serde(default)]
    pub targets: Targets,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

fn zero_law() -> LawConfig {
    LawConfig::Zero
}

/// Model and initial condition for a phase plan given separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ManeuverConfig {
    #[serde(default = "default_maneuver_name")]
    pub name: String,
    pub potential: RadialPotential,
    pub params: ModelParams,
    pub init: InitSpec,
    #[serde(default)]
    pub sim: SimSettings,
    #[serde(default)]
    pub options: PipelineOptions,
    #[serde(default)]
    pub targets: Targets,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

impl SimulateConfig {
    pub fn into_scenario(self) -> Result<Scenario> {
        let s = Scenario {
            name: self.name,
            description: String::new(),
            potential: self.potential,
            params: self.params,
            init: self.init,
            run: RunSpec::Law { law: self.law },
            sim: self.sim,
            baseline: self.baseline,
            targets: self.targets,
            variants: Vec::new(),
            checks: self.checks,
            budget_seconds: None,
        };
        s.validate()?;
        Ok(s)
    }
}

impl ManeuverConfig {
    pub fn into_scenario(self, phases: PhasePlan) -> Result<Scenario> {
        let s = Scenario {
            name: self.name,
            description: String::new(),
            potential: self.potential,
            params: self.params,
            init: self.init,
            run: RunSpec::Plan {
                phases,
                options: self.options,
            },
            sim: self.sim,
            baseline: None,
            targets: self.targets,
            variants: Vec::new(),
            checks: self.checks,
            budget_seconds: None,
        };
        s.validate()?;
        Ok(s)
    }
}

/// JSON schemas of every input format, by file stem.
pub fn schemas() -> Vec<(&'static str, String)> {
    fn render<T: JsonSchema>() -> String {
        let mut s = serde_json::to_string_pretty(&schemars::schema_for!(T)).expect("schema serializes");
        s.push('\n');
        s
    }
    vec![
        ("scenario", render::<Scenario>()),
        ("simulate", render::<SimulateConfig>()),
        ("maneuver", render::<ManeuverConfig>()),
        ("plan", render::<PhasePlan>()),
    ]
}
