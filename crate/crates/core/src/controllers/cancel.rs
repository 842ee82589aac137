use std::sync::Arc;

use super::reference::ReferencePath;
use crate::dynamics::{ControlLaw, LawContext};
use crate::error::{Result, SwarmError};
use crate::model::Vec2;

/// Cancels self-propulsion and interaction, then brakes every agent at constant rate `eta`.
///
/// Once `|v_i| <= eta * dt` the brake becomes `-v_i / dt`, which is continuous at the switch
/// and avoids the `v/|v|` singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityKill {
    pub eta: f64,
    pub dt: f64,
}

pub fn velocity_kill(eta: f64, dt: f64) -> Result<VelocityKill> {
    if !(eta > 0.0 && dt > 0.0) {
        return Err(SwarmError::Param(format!("velocity kill needs eta, dt > 0, got {eta}, {dt}")));
    }
    Ok(VelocityKill { eta, dt })
}

impl VelocityKill {
    /// Speed below which the brake is linear.
    pub fn threshold(&self) -> f64 {
        self.eta * self.dt
    }

    #[inline]
    fn brake(&self, v: Vec2) -> Vec2 {
        let s = v.norm();
        if s > self.eta * self.dt {
            v * (-self.eta / s)
        } else {
            v * (-1.0 / self.dt)
        }
    }
}

impl ControlLaw for VelocityKill {
    fn name(&self) -> &str {
        "velocity_kill"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        for i in 0..ctx.n() {
            out[i] = -ctx.propulsion(i) + ctx.forces[i] + self.brake(ctx.v[i]);
        }
        if log::log_enabled!(log::Level::Warn) {
            let m = crate::model::sup_norm(out);
            if m > ctx.params.m {
                log::warn!("velocity kill requests |u| = {m:.3e} > M = {} at t = {}", ctx.params.m, ctx.t);
            }
        }
        Ok(())
    }
}

/// `u = -(alpha - beta|v|^2) v + F + w`: turns each agent into a double integrator driven by `w`,
/// with `|w_i|` clipped at `w_bound`.
pub struct CancelAndInject<L> {
    pub inner: L,
    pub w_bound: f64,
}

pub fn cancel_and_inject<L: ControlLaw>(inner: L, w_bound: f64) -> CancelAndInject<L> {
    CancelAndInject { inner, w_bound }
}

impl<L: ControlLaw> ControlLaw for CancelAndInject<L> {
    fn name(&self) -> &str {
        "cancel_and_inject"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        self.inner.eval_into(ctx, out)?;
        crate::dynamics::saturate_in_place(out, self.w_bound);
        for i in 0..ctx.n() {
            out[i] = -ctx.propulsion(i) + ctx.forces[i] + out[i];
        }
        Ok(())
    }
}

/// `u = F`: removes the interaction so every agent follows the free speed dynamics.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlockHold;

pub fn flock_hold() -> FlockHold {
    FlockHold
}

impl ControlLaw for FlockHold {
    fn name(&self) -> &str {
        "flock_hold"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        out.copy_from_slice(ctx.forces);
        Ok(())
    }
}

/// Default PD gains: critically damped error dynamics with double root at `-1`.
pub const DEFAULT_PD_GAINS: (f64, f64) = (1.0, 2.0);

/// Tracking of a reference path with cancellation:
/// `u_i = -(alpha - beta|v_i|^2) v_i + F_i + a_i(t) - k1 (x_i - xr_i(t)) - k2 (v_i - vr_i(t))`.
#[derive(Clone)]
pub struct PdTracking {
    pub reference: Arc<dyn ReferencePath>,
    pub k1: f64,
    pub k2: f64,
    name: String,
}

pub fn pd_tracking(reference: Arc<dyn ReferencePath>, k1: f64, k2: f64) -> Result<PdTracking> {
    if !(k1 > 0.0 && k2 > 0.0) {
        return Err(SwarmError::Param(format!("PD gains must be positive, got {k1}, {k2}")));
    }
    Ok(PdTracking {
        reference,
        k1,
        k2,
        name: "pd_tracking".into(),
    })
}

impl PdTracking {
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl ControlLaw for PdTracking {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        for i in 0..ctx.n() {
            let r = self.reference.sample(ctx.t, i);
            out[i] = -ctx.propulsion(i) + ctx.forces[i] + r.a - (ctx.x[i] - r.x) * self.k1 - (ctx.v[i] - r.v) * self.k2;
        }
        Ok(())
    }
}
