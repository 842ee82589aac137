use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dynamics::rng_from_seed;
use crate::model::{centroid, ModelParams, SwarmState, Vec2};

/// Number of grid points used for the rotation angle.
pub const THETA_GRID: usize = 720;

/// Smallest enclosing circle `(center, radius)` by Welzl's incremental algorithm on a
/// fixed-seed shuffle.
pub fn min_enclosing_circle(points: &[Vec2]) -> (Vec2, f64) {
    match points.len() {
        0 => return (Vec2::ZERO, 0.0),
        1 => return (points[0], 0.0),
        _ => {}
    }
    let mut p = points.to_vec();
    p.shuffle(&mut rng_from_seed(0x5eed));
    let inside = |c: Vec2, r: f64, q: Vec2| (q - c).norm() <= r * (1.0 + 1e-12) + 1e-14;
    let mut c = p[0];
    let mut r = 0.0;
    for i in 1..p.len() {
        if inside(c, r, p[i]) {
            continue;
        }
        c = p[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, p[j]) {
                continue;
            }
            c = (p[i] + p[j]) * 0.5;
            r = (p[i] - c).norm();
            for k in 0..j {
                if inside(c, r, p[k]) {
                    continue;
                }
                let (cc, rr) = circumcircle(p[i], p[j], p[k]);
                c = cc;
                r = rr;
            }
        }
    }
    (c, r)
}

fn circumcircle(a: Vec2, b: Vec2, c: Vec2) -> (Vec2, f64) {
    let bx = b - a;
    let cx = c - a;
    let d = 2.0 * bx.cross(cx);
    if d.abs() < 1e-300 {
        // Collinear: the farthest pair spans the circle.
        let pairs = [(a, b), (a, c), (b, c)];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
            .unwrap();
        let m = (p + q) * 0.5;
        return (m, (p - m).norm());
    }
    let b2 = bx.norm_sq();
    let c2 = cx.norm_sq();
    let u = Vec2::new((cx.y * b2 - bx.y * c2) / d, (bx.x * c2 - cx.x * b2) / d);
    (a + u, u.norm())
}

/// `min_b max_i |x_i - b - R_theta x*_i|` together with the minimizing `b`.
pub fn position_gap(x: &[Vec2], xstar: &[Vec2], theta: f64) -> (f64, Vec2) {
    let d: Vec<Vec2> = x.iter().zip(xstar).map(|(a, s)| *a - s.rotate(theta)).collect();
    let (b, r) = min_enclosing_circle(&d);
    (r, b)
}

/// Result of the flock-manifold projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifoldDistance {
    pub distance: f64,
    pub position_part: f64,
    pub velocity_part: f64,
    pub theta: f64,
    pub b: Vec2,
    pub v_bar: Vec2,
}

/// Mixed-norm distance from `state` to the flock manifold of reference positions `xstar`.
pub fn distance_to_flock_manifold(state: &SwarmState, xstar: &[Vec2], params: &ModelParams) -> ManifoldDistance {
    let c = params.cruise_speed();
    let mean = state.mean_velocity();
    let v_bar = match mean.unit() {
        Some(e) => e * c,
        None => Vec2::new(c, 0.0),
    };
    let velocity_part = state.v.iter().map(|v| (*v - v_bar).norm()).fold(0.0, f64::max);

    let h = TAU / THETA_GRID as f64;
    let f = |th: f64| position_gap(&state.x, xstar, th).0;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..THETA_GRID {
        let th = h * k as f64;
        let v = f(th);
        if v < best.0 {
            best = (v, th);
        }
    }
    let (mut lo, mut hi) = (best.1 - h, best.1 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..60 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    let theta = if f(mid) < best.0 { mid } else { best.1 };
    let (position_part, bvec) = position_gap(&state.x, xstar, theta);
    ManifoldDistance {
        distance: position_part + velocity_part,
        position_part,
        velocity_part,
        theta: theta.rem_euclid(TAU),
        b: bvec,
        v_bar,
    }
}

/// Deviation of a state from a rigid mill.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MillDiagnostics {
    pub radius_dev: f64,
    pub gamma_mean: f64,
    pub speed_dev: f64,
}

impl MillDiagnostics {
    pub fn max(&self) -> f64 {
        self.radius_dev.max(self.gamma_mean).max(self.speed_dev)
    }
}

/// Mill diagnostics about the centroid; radii compare against `target` when given, else
/// against their own mean. The tangent orientation follows the sign of the angular momentum.
pub fn mill_diagnostics_with(state: &SwarmState, params: &ModelParams, target: Option<f64>) -> MillDiagnostics {
    let n = state.n().max(1) as f64;
    let xm = centroid(&state.x);
    let radii: Vec<f64> = state.x.iter().map(|x| (*x - xm).norm()).collect();
    let rhat = target.unwrap_or_else(|| radii.iter().sum::<f64>() / n);
    let radius_dev = radii.iter().map(|r| (r - rhat).abs()).sum::<f64>() / n;
    let lz: f64 = state.x.iter().zip(&state.v).map(|(x, v)| (*x - xm).cross(*v)).sum();
    let o = if lz < 0.0 { -1.0 } else { 1.0 };
    let mut gamma = 0.0;
    for (x, v) in state.x.iter().zip(&state.v) {
        let t = (*x - xm).perp() * o;
        gamma += t.cross(*v).atan2(t.dot(*v)).abs();
    }
    let c = params.cruise_speed();
    let speed_dev = state.v.iter().map(|v| (v.norm() - c).abs()).sum::<f64>() / n;
    MillDiagnostics {
        radius_dev,
        gamma_mean: gamma / n,
        speed_dev,
    }
}

pub fn mill_diagnostics(state: &SwarmState, params: &ModelParams) -> MillDiagnostics {
    mill_diagnostics_with(state, params, None)
}
