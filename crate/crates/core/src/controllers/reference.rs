use std::f64::consts::TAU;
use std::sync::Arc;

use crate::model::Vec2;

/// Reference position, velocity and acceleration of one agent at one time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RefSample {
    pub x: Vec2,
    pub v: Vec2,
    pub a: Vec2,
}

/// A differentiable per-agent time path `t -> (x_i(t), v_i(t), a_i(t))`.
pub trait ReferencePath: Send + Sync {
    fn sample(&self, t: f64, i: usize) -> RefSample;
}

impl<F> ReferencePath for F
where
    F: Fn(f64, usize) -> RefSample + Send + Sync,
{
    fn sample(&self, t: f64, i: usize) -> RefSample {
        self(t, i)
    }
}

impl<R: ReferencePath + ?Sized> ReferencePath for Arc<R> {
    fn sample(&self, t: f64, i: usize) -> RefSample {
        (**self).sample(t, i)
    }
}

/// Quintic smoothstep `6s^5 - 15s^4 + 10s^3` on `[0,1]`, clamped outside, with its first two
/// derivatives.
#[inline]
pub fn smoothstep5(s: f64) -> (f64, f64, f64) {
    if s <= 0.0 {
        (0.0, 0.0, 0.0)
    } else if s >= 1.0 {
        (1.0, 0.0, 0.0)
    } else {
        let s2 = s * s;
        let s3 = s2 * s;
        (
            s3 * (10.0 + s * (-15.0 + 6.0 * s)),
            30.0 * s2 * (1.0 - s) * (1.0 - s),
            60.0 * s * (1.0 - s) * (1.0 - 2.0 * s),
        )
    }
}

/// Agents held at fixed points.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoints(pub Vec<Vec2>);

impl ReferencePath for FixedPoints {
    fn sample(&self, _t: f64, i: usize) -> RefSample {
        RefSample {
            x: self.0[i],
            ..Default::default()
        }
    }
}

/// Each agent moves from `from[i]` to `to[i]` along a straight line with a quintic time
/// profile over `[t0, t0 + duration]`, at rest at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct StraightMoves {
    pub from: Vec<Vec2>,
    pub to: Vec<Vec2>,
    pub t0: f64,
    pub duration: f64,
}

impl ReferencePath for StraightMoves {
    fn sample(&self, t: f64, i: usize) -> RefSample {
        let (s, ds, dds) = smoothstep5((t - self.t0) / self.duration);
        let d = self.to[i] - self.from[i];
        RefSample {
            x: self.from[i] + d * s,
            v: d * (ds / self.duration),
            a: d * (dds / (self.duration * self.duration)),
        }
    }
}

/// A rigid formation that accelerates smoothly from rest to a constant velocity `w` over
/// `[t0, t0 + duration]` and keeps translating afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityRamp {
    pub x0: Vec<Vec2>,
    pub w: Vec2,
    /// Common velocity at `t0`.
    pub w0: Vec2,
    pub t0: f64,
    pub duration: f64,
}

impl ReferencePath for VelocityRamp {
    fn sample(&self, t: f64, i: usize) -> RefSample {
        let tau = ((t - self.t0) / self.duration).max(0.0);
        let dw = self.w - self.w0;
        // integral of the smoothstep from 0 to tau: s^6 - 3 s^5 + 2.5 s^4, then linear
        let (s, ds, _) = smoothstep5(tau);
        let integral = if tau < 1.0 {
            let t4 = tau.powi(4);
            t4 * (2.5 + tau * (-3.0 + tau))
        } else {
            0.5 + (tau - 1.0)
        };
        RefSample {
            x: self.x0[i] + self.w0 * (t - self.t0).max(0.0) + dw * (integral * self.duration),
            v: self.w0 + dw * s,
            a: dw * (ds / self.duration),
        }
    }
}

/// Equispaced ring whose radius moves from `r_from` to `r_to` along a quintic smoothstep over
/// `[t0, t0 + duration]` (constant outside).
///
/// `Flock`: the ring translates with constant velocity `w`. `Mill`: it rotates about its center
/// with angular velocity `orientation * c / R(t)`, `c` the cruise speed, so agents keep speed
/// `c` tangentially. The rotation angle `c * int dt / R` is tabulated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RingPath {
    pub center: Vec2,
    pub r_from: f64,
    pub r_to: f64,
    pub t0: f64,
    pub duration: f64,
    pub phase: f64,
    pub n: usize,
    pub motion: RingMotion,
    /// `int_{t0}^{t0 + k duration / PANELS} ds / R(s)` for `k = 0..=PANELS`.
    inv_r: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RingMotion {
    Flock { w: Vec2 },
    Mill { speed: f64, orientation: f64 },
}

const PANELS: usize = 256;

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_X: [f64; 4] = [0.1834346424956498, 0.525_532_409_916_329, 0.7966664774136267, 0.9602898564975363];
const GL_W: [f64; 4] = [0.362_683_783_378_362, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];

fn gauss8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = 0.0;
    for k in 0..4 {
        acc += GL_W[k] * (f(m - h * GL_X[k]) + f(m + h * GL_X[k]));
    }
    acc * h
}

impl RingPath {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        center: Vec2,
        r_from: f64,
        r_to: f64,
        t0: f64,
        duration: f64,
        phase: f64,
        n: usize,
        motion: RingMotion,
    ) -> Self {
        let mut p = RingPath { center, r_from, r_to, t0, duration, phase, n, motion, inv_r: Vec::new() };
        if duration > 0.0 {
            let h = duration / PANELS as f64;
            let mut acc = 0.0;
            p.inv_r.push(0.0);
            for k in 0..PANELS {
                let a = t0 + h * k as f64;
                acc += gauss8(|t| 1.0 / p.radius(t).0, a, a + h);
                p.inv_r.push(acc);
            }
        }
        p
    }

    /// `(R, R', R'')` at time `t`.
    pub fn radius(&self, t: f64) -> (f64, f64, f64) {
        if self.duration <= 0.0 {
            return (self.r_to, 0.0, 0.0);
        }
        let (s, ds, dds) = smoothstep5((t - self.t0) / self.duration);
        let d = self.r_to - self.r_from;
        (self.r_from + d * s, d * ds / self.duration, d * dds / (self.duration * self.duration))
    }

    /// `int_{t0}^{t} ds / R(s)`.
    fn inverse_radius_integral(&self, t: f64) -> f64 {
        let dt = t - self.t0;
        if self.duration <= 0.0 {
            return dt / self.r_to;
        }
        if dt <= 0.0 {
            return dt / self.r_from;
        }
        if dt >= self.duration {
            return self.inv_r[PANELS] + (dt - self.duration) / self.r_to;
        }
        let h = self.duration / PANELS as f64;
        let k = ((dt / h) as usize).min(PANELS - 1);
        let a = self.t0 + h * k as f64;
        self.inv_r[k] + gauss8(|s| 1.0 / self.radius(s).0, a, t)
    }
}

impl ReferencePath for RingPath {
    fn sample(&self, t: f64, i: usize) -> RefSample {
        let (r, dr, ddr) = self.radius(t);
        let base = self.phase + TAU * i as f64 / self.n as f64;
        match self.motion {
            RingMotion::Flock { w } => {
                let e = Vec2::polar(1.0, base);
                RefSample {
                    x: self.center + w * (t - self.t0) + e * r,
                    v: w + e * dr,
                    a: e * ddr,
                }
            }
            RingMotion::Mill { speed, orientation } => {
                let th = base + orientation * speed * self.inverse_radius_integral(t);
                let e = Vec2::polar(1.0, th);
                let ep = e.perp();
                let om = orientation * speed / r;
                RefSample {
                    x: self.center + e * r,
                    v: e * dr + ep * (orientation * speed),
                    a: e * (ddr - speed * speed / r) + ep * (om * dr),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_derivatives(p: &dyn ReferencePath, ts: &[f64], n: usize) {
        let h = 1e-5;
        for &t in ts {
            for i in 0..n {
                let s = p.sample(t, i);
                let fx = (p.sample(t + h, i).x - p.sample(t - h, i).x) / (2.0 * h);
                let fv = (p.sample(t + h, i).v - p.sample(t - h, i).v) / (2.0 * h);
                assert!((fx - s.v).norm() < 1e-6, "velocity at t={t}, i={i}");
                assert!((fv - s.a).norm() < 1e-5, "acceleration at t={t}, i={i}");
            }
        }
    }

    #[test]
    fn straight_moves_consistent() {
        let p = StraightMoves {
            from: vec![Vec2::ZERO, Vec2::new(1.0, 1.0)],
            to: vec![Vec2::new(3.0, 0.0), Vec2::new(-1.0, 2.0)],
            t0: 1.0,
            duration: 4.0,
        };
        check_derivatives(&p, &[1.5, 2.0, 3.3, 4.9], 2);
        assert_eq!(p.sample(5.0, 0).x, Vec2::new(3.0, 0.0));
        assert_eq!(p.sample(0.0, 1).x, Vec2::new(1.0, 1.0));
    }

    #[test]
    fn velocity_ramp_consistent() {
        let p = VelocityRamp {
            x0: vec![Vec2::ZERO, Vec2::new(1.0, 0.0)],
            w: Vec2::new(1.0, 0.5),
            w0: Vec2::new(-0.2, 0.0),
            t0: 0.0,
            duration: 3.0,
        };
        check_derivatives(&p, &[0.5, 1.5, 2.9, 3.5, 7.0], 2);
        assert_eq!(p.sample(10.0, 0).v, Vec2::new(1.0, 0.5));
    }

    #[test]
    fn ring_paths_consistent() {
        for motion in [
            RingMotion::Flock { w: Vec2::new(0.3, 1.0) },
            RingMotion::Mill { speed: 1.8, orientation: 1.0 },
            RingMotion::Mill { speed: 1.8, orientation: -1.0 },
        ] {
            let p = RingPath::new(Vec2::new(0.5, -1.0), 3.0, 1.2, 0.0, 10.0, 0.3, 5, motion);
            check_derivatives(&p, &[-1.0, 0.5, 4.0, 9.5, 12.0], 5);
            let (r, _, _) = p.radius(20.0);
            let s = p.sample(20.0, 2);
            if let RingMotion::Mill { speed, .. } = motion {
                assert!(((s.x - p.center).norm() - r).abs() < 1e-12);
                assert!((s.v.norm() - speed).abs() < 1e-12);
            }
        }
    }
}
