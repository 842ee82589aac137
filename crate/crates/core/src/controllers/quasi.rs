use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ControlLaw, LawContext};
use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, Vec2};

/// Slow rotation of a flock's heading from `theta0` to `theta_t` over `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct QuasiStaticPlan {
    pub theta0: f64,
    #[serde(rename = "thetaT")]
    pub theta_t: f64,
    #[serde(rename = "T")]
    pub t_total: f64,
    pub v0: Vec2,
}

impl QuasiStaticPlan {
    /// Plan whose reference velocity at `t = 0` is the cruise velocity at angle `theta0`.
    pub fn new(params: &ModelParams, theta0: f64, theta_t: f64, t_total: f64) -> Self {
        QuasiStaticPlan {
            theta0,
            theta_t,
            t_total,
            v0: Vec2::polar(params.cruise_speed(), theta0),
        }
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        if (self.v0.norm() - params.cruise_speed()).abs() > 1e-9 {
            return Err(SwarmError::Param(format!(
                "|v0| = {} must equal the cruise speed {}",
                self.v0.norm(),
                params.cruise_speed()
            )));
        }
        if !(self.t_total > 0.0) {
            return Err(SwarmError::Param(format!("T must be > 0, got {}", self.t_total)));
        }
        Ok(())
    }

    /// Rotation applied to `v0` at time `t`: `theta(t) - theta0`, frozen after `T`.
    pub fn rotation(&self, t: f64) -> f64 {
        let s = (t / self.t_total).clamp(0.0, 1.0);
        s * (self.theta_t - self.theta0)
    }

    /// Reference velocity `R_{theta(t)} v0`.
    pub fn reference_velocity(&self, t: f64) -> Vec2 {
        self.v0.rotate(self.rotation(t))
    }
}

/// `u_i = -M (v_i - R_{theta(t)} v0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiStaticRotation {
    pub m: f64,
    pub plan: QuasiStaticPlan,
}

pub fn quasi_static_rotation(m: f64, plan: QuasiStaticPlan) -> QuasiStaticRotation {
    QuasiStaticRotation { m, plan }
}

impl ControlLaw for QuasiStaticRotation {
    fn name(&self) -> &str {
        "quasi_static_rotation"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        let vr = self.plan.reference_velocity(ctx.t);
        for (o, v) in out.iter_mut().zip(ctx.v) {
            *o = (*v - vr) * (-self.m);
        }
        Ok(())
    }
}
