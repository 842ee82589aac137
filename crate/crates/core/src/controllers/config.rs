use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::cancel::{cancel_and_inject, flock_hold, pd_tracking, velocity_kill, DEFAULT_PD_GAINS};
use super::fictitious::{build_repulsive_surrogate, fictitious_potential_control, surrogate_cutoff_radius};
use super::instantaneous::{InstantaneousFlock, InstantaneousMill, InstantaneousSpec};
use super::jq::{jq_feedback, JqParams};
use super::mill::{mill_centripetal, mill_velocity_feedback};
use super::quasi::{quasi_static_rotation, QuasiStaticPlan};
use super::reference::{FixedPoints, ReferencePath, RingMotion, RingPath};
use super::sparse::sparsify;
use crate::dynamics::{ControlLaw, ZeroControl};
use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, RadialPotential, Vec2};

/// Declarative description of a control law, e.g. `{"law": "jq", "gamma": 3.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum LawConfig {
    Zero,
    /// `gamma` defaults to twice its lower bound.
    Jq {
        #[serde(default)]
        gamma: Option<f64>,
    },
    VelocityKill {
        eta: f64,
        dt: f64,
    },
    FlockHold,
    CancelAndInject {
        inner: Box<LawConfig>,
        w_bound: f64,
    },
    QuasiStaticRotation {
        theta0: f64,
        #[serde(rename = "thetaT")]
        theta_t: f64,
        #[serde(rename = "T")]
        t_total: f64,
        /// Control gain; defaults to `M`.
        #[serde(default)]
        gain: Option<f64>,
    },
    MillCentripetal {
        #[serde(default)]
        center: Vec2,
        #[serde(rename = "R")]
        radius: f64,
    },
    MillVelocityFeedback {
        #[serde(default)]
        gain: Option<f64>,
    },
    InstantaneousMill {
        spec: InstantaneousSpec,
    },
    InstantaneousFlock {
        spec: InstantaneousSpec,
    },
    Fictitious {
        eta: f64,
        /// Cutoff radius; found automatically when absent.
        #[serde(default, rename = "R0")]
        r0: Option<f64>,
        inner: Box<LawConfig>,
    },
    Sparsify {
        inner: Box<LawConfig>,
        slot: f64,
        /// Clip level of the active control; defaults to `M`.
        #[serde(default)]
        bound: Option<f64>,
    },
    PdTracking {
        reference: ReferenceConfig,
        #[serde(default)]
        k1: Option<f64>,
        #[serde(default)]
        k2: Option<f64>,
    },
}

/// Reference paths available from configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReferenceConfig {
    FixedPoints {
        x: Vec<Vec2>,
    },
    FlockRing {
        center: Vec2,
        r_from: f64,
        r_to: f64,
        #[serde(default)]
        t0: f64,
        duration: f64,
        #[serde(default)]
        phase: f64,
        w: Vec2,
    },
    MillRing {
        center: Vec2,
        r_from: f64,
        r_to: f64,
        #[serde(default)]
        t0: f64,
        duration: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default = "one")]
        orientation: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl ReferenceConfig {
    pub fn build(&self, params: &ModelParams) -> Arc<dyn ReferencePath> {
        match self {
            ReferenceConfig::FixedPoints { x } => Arc::new(FixedPoints(x.clone())),
            ReferenceConfig::FlockRing {
                center,
                r_from,
                r_to,
                t0,
                duration,
                phase,
                w,
            } => Arc::new(RingPath::new(
                *center,
                *r_from,
                *r_to,
                *t0,
                *duration,
                *phase,
                params.n,
                RingMotion::Flock { w: *w },
            )),
            ReferenceConfig::MillRing {
                center,
                r_from,
                r_to,
                t0,
                duration,
                phase,
                orientation,
            } => Arc::new(RingPath::new(
                *center,
                *r_from,
                *r_to,
                *t0,
                *duration,
                *phase,
                params.n,
                RingMotion::Mill {
                    speed: params.cruise_speed(),
                    orientation: *orientation,
                },
            )),
        }
    }
}

impl LawConfig {
    pub fn name(&self) -> &'static str {
        match self {
            LawConfig::Zero => "zero",
            LawConfig::Jq { .. } => "jq",
            LawConfig::VelocityKill { .. } => "velocity_kill",
            LawConfig::FlockHold => "flock_hold",
            LawConfig::CancelAndInject { .. } => "cancel_and_inject",
            LawConfig::QuasiStaticRotation { .. } => "quasi_static_rotation",
            LawConfig::MillCentripetal { .. } => "mill_centripetal",
            LawConfig::MillVelocityFeedback { .. } => "mill_velocity_feedback",
            LawConfig::InstantaneousMill { .. } => "instantaneous_mill",
            LawConfig::InstantaneousFlock { .. } => "instantaneous_flock",
            LawConfig::Fictitious { .. } => "fictitious",
            LawConfig::Sparsify { .. } => "sparsify",
            LawConfig::PdTracking { .. } => "pd_tracking",
        }
    }

    pub fn build(&self, pot: &RadialPotential, params: &ModelParams) -> Result<Box<dyn ControlLaw>> {
        Ok(match self {
            LawConfig::Zero => Box::new(ZeroControl),
            LawConfig::Jq { gamma } => {
                let jq = match gamma {
                    Some(g) => JqParams { gamma: *g },
                    None => JqParams::above_bound(params, 2.0),
                };
                Box::new(jq_feedback(params, jq)?)
            }
            LawConfig::VelocityKill { eta, dt } => Box::new(velocity_kill(*eta, *dt)?),
            LawConfig::FlockHold => Box::new(flock_hold()),
            LawConfig::CancelAndInject { inner, w_bound } => {
                Box::new(cancel_and_inject(inner.build(pot, params)?, *w_bound))
            }
            LawConfig::QuasiStaticRotation {
                theta0,
                theta_t,
                t_total,
                gain,
            } => {
                let plan = QuasiStaticPlan::new(params, *theta0, *theta_t, *t_total);
                plan.validate(params)?;
                Box::new(quasi_static_rotation(gain.unwrap_or(params.m), plan))
            }
            LawConfig::MillCentripetal { center, radius } => Box::new(mill_centripetal(*center, *radius)?),
            LawConfig::MillVelocityFeedback { gain } => {
                Box::new(mill_velocity_feedback(gain.unwrap_or(params.m), params))
            }
            LawConfig::InstantaneousMill { spec } => {
                spec.validate()?;
                Box::new(InstantaneousMill { spec: *spec })
            }
            LawConfig::InstantaneousFlock { spec } => {
                spec.validate()?;
                if !(spec.lambda > 0.0) {
                    return Err(SwarmError::Param("flock variant needs lambda > 0".into()));
                }
                Box::new(InstantaneousFlock { spec: *spec })
            }
            LawConfig::Fictitious { eta, r0, inner } => {
                let r0 = match r0 {
                    Some(r) => *r,
                    None => surrogate_cutoff_radius(pot, *eta, 1.0)?,
                };
                let s = build_repulsive_surrogate(pot, *eta, r0)?;
                Box::new(fictitious_potential_control(Arc::new(s), inner.build(pot, params)?))
            }
            LawConfig::Sparsify { inner, slot, bound } => {
                if !(*slot > 0.0) {
                    return Err(SwarmError::Param("sparsify slot must be > 0".into()));
                }
                Box::new(sparsify(inner.build(pot, params)?, params, *slot, bound.unwrap_or(params.m)))
            }
            LawConfig::PdTracking { reference, k1, k2 } => Box::new(pd_tracking(
                reference.build(params),
                k1.unwrap_or(DEFAULT_PD_GAINS.0),
                k2.unwrap_or(DEFAULT_PD_GAINS.1),
            )?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build() {
        let pot = RadialPotential::power_law(4.0, 1.0);
        let params = ModelParams::new(10.0, 3.0, 20.0, 8).unwrap();
        for src in [
            r#"{"law":"zero"}"#,
            r#"{"law":"jq"}"#,
            r#"{"law":"jq","gamma":5}"#,
            r#"{"law":"velocity_kill","eta":0.01,"dt":0.01}"#,
            r#"{"law":"flock_hold"}"#,
            r#"{"law":"cancel_and_inject","inner":{"law":"zero"},"w_bound":1}"#,
            r#"{"law":"quasi_static_rotation","theta0":0,"thetaT":1.5,"T":100}"#,
            r#"{"law":"mill_centripetal","center":[0,0],"R":1.07}"#,
            r#"{"law":"mill_velocity_feedback"}"#,
            r#"{"law":"instantaneous_mill","spec":{"r_target":1.07}}"#,
            r#"{"law":"instantaneous_flock","spec":{"r_target":0.6,"v_bar":[1.8,0]}}"#,
            r#"{"law":"sparsify","inner":{"law":"jq"},"slot":0.01}"#,
            r#"{"law":"pd_tracking","reference":{"kind":"mill_ring","center":[0,0],"r_from":3,"r_to":1.07,"duration":50}}"#,
        ] {
            let cfg: LawConfig = serde_json::from_str(src).unwrap_or_else(|e| panic!("{src}: {e}"));
            let law = cfg.build(&pot, &params).unwrap_or_else(|e| panic!("{src}: {e}"));
            assert!(!law.name().is_empty());
        }
        assert!(serde_json::from_str::<LawConfig>(r#"{"law":"jq","gama":2}"#).is_err());
        assert!(serde_json::from_str::<LawConfig>(r#"{"law":"nope"}"#).is_err());
    }
}
