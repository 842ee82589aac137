//! Reference paths and inner laws used by the pipelines.

use std::sync::Arc;

use crate::controllers::{smoothstep5, RefSample, ReferencePath};
use crate::dynamics::{ControlLaw, LawContext};
use crate::error::Result;
use crate::model::Vec2;

/// Double-integrator PD on a reference path, returning only the injected acceleration
/// `w = a_r - k1 (x - x_r) - k2 (v - v_r)`. Wrap in `cancel_and_inject` to drive agents with it.
#[derive(Clone)]
pub struct PdAccel {
    pub reference: Arc<dyn ReferencePath>,
    pub k1: f64,
    pub k2: f64,
}

impl ControlLaw for PdAccel {
    fn name(&self) -> &str {
        "pd_accel"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        for i in 0..ctx.n() {
            let r = self.reference.sample(ctx.t, i);
            out[i] = r.a - (ctx.x[i] - r.x) * self.k1 - (ctx.v[i] - r.v) * self.k2;
        }
        Ok(())
    }
}

/// One agent moves on a straight quintic profile, every other agent is held in place.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleMove {
    pub hold: Vec<Vec2>,
    pub agent: usize,
    pub to: Vec2,
    pub t0: f64,
    pub duration: f64,
}

impl ReferencePath for SingleMove {
    fn sample(&self, t: f64, i: usize) -> RefSample {
        if i != self.agent {
            return RefSample {
                x: self.hold[i],
                ..Default::default()
            };
        }
        let (s, ds, dds) = smoothstep5((t - self.t0) / self.duration);
        let d = self.to - self.hold[i];
        RefSample {
            x: self.hold[i] + d * s,
            v: d * (ds / self.duration),
            a: d * (dds / (self.duration * self.duration)),
        }
    }
}

/// Agents slide along a circle of radius `radius` from `from[i]` to `to[i]` (angles).
#[derive(Debug, Clone, PartialEq)]
pub struct ArcMoves {
    pub center: Vec2,
    pub radius: f64,
    pub from: Vec<f64>,
    pub to: Vec<f64>,
    pub t0: f64,
    pub duration: f64,
}

impl ReferencePath for ArcMoves {
    fn sample(&self, t: f64, i: usize) -> RefSample {
        let (s, ds, dds) = smoothstep5((t - self.t0) / self.duration);
        let dphi = self.to[i] - self.from[i];
        let phi = self.from[i] + dphi * s;
        let w = dphi * ds / self.duration;
        let dw = dphi * dds / (self.duration * self.duration);
        let e = Vec2::polar(1.0, phi);
        let ep = e.perp();
        RefSample {
            x: self.center + e * self.radius,
            v: ep * (self.radius * w),
            a: ep * (self.radius * dw) - e * (self.radius * w * w),
        }
    }
}

/// Rigid rotation at angular velocity `omega[i]` about `centers[i]` on radius `radii[i]`, as an
/// injected acceleration: centripetal term plus PD on the radius and on the tangential velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidSpin {
    pub centers: Vec<Vec2>,
    pub radii: Vec<f64>,
    pub omega: Vec<f64>,
    pub k1: f64,
    pub k2: f64,
}

impl RigidSpin {
    pub fn target_velocity(&self, i: usize, x: Vec2) -> Vec2 {
        (x - self.centers[i]).perp() * self.omega[i]
    }
}

impl ControlLaw for RigidSpin {
    fn name(&self) -> &str {
        "rigid_spin"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        for i in 0..ctx.n() {
            let d = ctx.x[i] - self.centers[i];
            let r = d.norm();
            let e = d.unit().unwrap_or(Vec2::new(1.0, 0.0));
            let om = self.omega[i];
            out[i] = -(d * (om * om)) - e * (self.k1 * (r - self.radii[i]))
                - (ctx.v[i] - self.target_velocity(i, ctx.x[i])) * self.k2;
        }
        Ok(())
    }
}

/// Runs `inner` on the clock `t - t0`.
pub struct TimeShift<L> {
    pub inner: L,
    pub t0: f64,
}

impl<L: ControlLaw> ControlLaw for TimeShift<L> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        let shifted = LawContext { t: ctx.t - self.t0, ..*ctx };
        self.inner.eval_into(&shifted, out)
    }
}

/// Duration of a quintic move over `distance` whose peak speed is `speed`, at least `floor`.
pub fn move_duration(distance: f64, speed: f64, floor: f64) -> f64 {
    (1.875 * distance / speed).max(floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_reference_is_consistent() {
        let arc = ArcMoves {
            center: Vec2::new(1.0, -1.0),
            radius: 2.0,
            from: vec![0.3],
            to: vec![2.0],
            t0: 1.0,
            duration: 3.0,
        };
        let h = 1e-5;
        for t in [1.5, 2.2, 3.7] {
            let s = arc.sample(t, 0);
            let p = arc.sample(t + h, 0);
            let m = arc.sample(t - h, 0);
            assert!(((p.x - m.x) * (0.5 / h) - s.v).norm() < 1e-8);
            assert!(((p.v - m.v) * (0.5 / h) - s.a).norm() < 1e-7);
            assert!(((s.x - arc.center).norm() - 2.0).abs() < 1e-12);
        }
        assert!((arc.sample(10.0, 0).x - (arc.center + Vec2::polar(2.0, 2.0))).norm() < 1e-12);
    }

    #[test]
    fn single_move_holds_others() {
        let m = SingleMove {
            hold: vec![Vec2::ZERO, Vec2::new(1.0, 0.0)],
            agent: 1,
            to: Vec2::new(5.0, 0.0),
            t0: 0.0,
            duration: 2.0,
        };
        assert_eq!(m.sample(1.0, 0).x, Vec2::ZERO);
        assert_eq!(m.sample(1.0, 1).x, Vec2::new(3.0, 0.0));
        assert_eq!(m.sample(3.0, 1).x, Vec2::new(5.0, 0.0));
    }
}
