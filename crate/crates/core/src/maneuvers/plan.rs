use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::runner::{PhaseRunner, PipelineOptions};
use crate::analysis::mill_diagnostics_with;
use crate::controllers::LawConfig;
use crate::dynamics::{order_parameters, Probe, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, RadialPotential, SwarmState};

/// State condition that ends a phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StopCondition {
    MaxSpeedBelow { value: f64 },
    MaxForceBelow { value: f64 },
    /// Both speed and force below their thresholds.
    AtRest { speed: f64, force: f64 },
    /// Every `||v_i| - c| < tol`.
    SpeedsNearCruise { tol: f64 },
    PolarizationAbove { value: f64 },
    AngMomentumAbove { value: f64 },
    /// Largest mill diagnostic below `value`, radii measured against `R` when given.
    MillDiagnosticsBelow {
        value: f64,
        #[serde(default, rename = "R")]
        radius: Option<f64>,
    },
    All { conditions: Vec<StopCondition> },
}

impl StopCondition {
    pub fn holds(&self, probe: &Probe, params: &ModelParams) -> bool {
        let s = probe.state;
        match self {
            StopCondition::MaxSpeedBelow { value } => s.max_speed() < *value,
            StopCondition::MaxForceBelow { value } => probe.max_force() < *value,
            StopCondition::AtRest { speed, force } => s.max_speed() < *speed && probe.max_force() < *force,
            StopCondition::SpeedsNearCruise { tol } => {
                let c = params.cruise_speed();
                s.v.iter().all(|v| (v.norm() - c).abs() < *tol)
            }
            StopCondition::PolarizationAbove { value } => order_parameters(s).polarization > *value,
            StopCondition::AngMomentumAbove { value } => order_parameters(s).ang_momentum > *value,
            StopCondition::MillDiagnosticsBelow { value, radius } => {
                mill_diagnostics_with(s, params, *radius).max() < *value
            }
            StopCondition::All { conditions } => conditions.iter().all(|c| c.holds(probe, params)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            StopCondition::MaxSpeedBelow { value } => format!("max speed < {value}"),
            StopCondition::MaxForceBelow { value } => format!("max force < {value}"),
            StopCondition::AtRest { speed, force } => format!("max speed < {speed} and max force < {force}"),
            StopCondition::SpeedsNearCruise { tol } => format!("speeds within {tol} of cruise"),
            StopCondition::PolarizationAbove { value } => format!("polarization > {value}"),
            StopCondition::AngMomentumAbove { value } => format!("angular momentum > {value}"),
            StopCondition::MillDiagnosticsBelow { value, .. } => format!("mill diagnostics < {value}"),
            StopCondition::All { conditions } => {
                conditions.iter().map(|c| c.describe()).collect::<Vec<_>>().join(" and ")
            }
        }
    }
}

/// When a phase ends: always by `max_duration`, earlier if `condition` holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StopSpec {
    pub max_duration: f64,
    #[serde(default)]
    pub condition: Option<StopCondition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PhaseSpec {
    pub name: String,
    pub law: LawConfig,
    pub stop: StopSpec,
}

/// Ordered list of phases, serialized as a JSON array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(transparent)]
pub struct PhasePlan(pub Vec<PhaseSpec>);

impl PhasePlan {
    pub fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(SwarmError::Config("phase plan is empty".into()));
        }
        for p in &self.0 {
            if !(p.stop.max_duration > 0.0 && p.stop.max_duration.is_finite()) {
                return Err(SwarmError::Config(format!(
                    "phase '{}' needs a finite positive max_duration, got {}",
                    p.name, p.stop.max_duration
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let plan: PhasePlan = serde_json::from_str(src)?;
        plan.validate()?;
        Ok(plan)
    }
}

/// Execute a plan; a phase whose condition never holds fails with a phase timeout.
pub fn run_plan(
    init: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    plan: &PhasePlan,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    plan.validate()?;
    let mut runner = PhaseRunner::with_options(init, pot, params, opts);
    for phase in &plan.0 {
        let law = phase.law.build(pot, params)?;
        match &phase.stop.condition {
            Some(cond) => {
                let pred = |p: &Probe| cond.holds(p, params);
                runner.run(&phase.name, &law, Some((&cond.describe(), &pred)), phase.stop.max_duration)?;
            }
            None => {
                runner.run(&phase.name, &law, None, phase.stop.max_duration)?;
            }
        }
    }
    Ok(runner.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Vec2;

    #[test]
    fn plan_round_trip_and_unknown_keys() {
        let src = r#"[
            {"name": "settle", "law": {"law": "jq"},
             "stop": {"max_duration": 50.0, "condition": {"kind": "at_rest", "speed": 0.01, "force": 0.01}}},
            {"name": "hold", "law": {"law": "flock_hold"}, "stop": {"max_duration": 1.0}}
        ]"#;
        let plan = PhasePlan::from_json(src).unwrap();
        let again: PhasePlan = serde_json::from_str(&serde_json::to_string(&plan).unwrap()).unwrap();
        assert_eq!(plan, again);
        let bad = r#"[{"name": "x", "law": {"law": "zero"}, "stop": {"max_duration": 1.0, "extra": 1}}]"#;
        assert!(PhasePlan::from_json(bad).is_err());
        assert!(PhasePlan::from_json("[]").is_err());
    }

    #[test]
    fn timeout_names_the_predicate() {
        let pot = RadialPotential::power_law(4.0, 1.0);
        let params = ModelParams::new(1.0, 1.0, 5.0, 2).unwrap();
        let init = SwarmState::at_rest(0.0, vec![Vec2::ZERO, Vec2::new(1.0, 0.0)]);
        let plan = PhasePlan(vec![PhaseSpec {
            name: "never".into(),
            law: LawConfig::Zero,
            stop: StopSpec {
                max_duration: 0.5,
                condition: Some(StopCondition::PolarizationAbove { value: 2.0 }),
            },
        }]);
        let err = run_plan(&init, &pot, &params, &plan, &PipelineOptions::default()).unwrap_err();
        match err {
            SwarmError::PhaseTimeout { phase, predicate, .. } => {
                assert_eq!(phase, "never");
                assert!(predicate.contains("polarization"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn phase_records_chain() {
        let pot = RadialPotential::power_law(4.0, 1.0);
        let params = ModelParams::new(1.0, 1.0, 5.0, 2).unwrap();
        let init = SwarmState::at_rest(0.0, vec![Vec2::ZERO, Vec2::new(1.0, 0.0)]);
        let plan = PhasePlan(vec![
            PhaseSpec {
                name: "a".into(),
                law: LawConfig::Zero,
                stop: StopSpec { max_duration: 1.0, condition: None },
            },
            PhaseSpec {
                name: "b".into(),
                law: LawConfig::FlockHold,
                stop: StopSpec { max_duration: 2.0, condition: None },
            },
        ]);
        let tr = run_plan(&init, &pot, &params, &plan, &PipelineOptions::default()).unwrap();
        assert_eq!(tr.phases.len(), 2);
        assert_eq!(tr.phases[0].t_end, tr.phases[1].t_start);
        assert_eq!(tr.phases[1].t_end, 3.0);
        assert_eq!(tr.phases[1].last_sample, tr.len() - 1);
        assert_eq!(tr.times[tr.phases[1].first_sample], 1.0);
    }
}
