use std::f64::consts::PI;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, RadialPotential};

/// Whether the ring rotates (mill) or translates (flock).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum RingType {
    Mill,
    Flock,
}

/// `sum_{p=1}^{N-1} sin(p pi/N) [U'(2R sin(p pi/N)) - omega^2 2R sin(p pi/N)]`, with
/// `omega = sqrt(alpha/beta)/R` for mills and `0` for flocks. Zero exactly at ring equilibria.
pub fn mill_radius_residual(
    pot: &RadialPotential,
    params: &ModelParams,
    n: usize,
    r: f64,
    kind: RingType,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(SwarmError::Domain(format!("ring radius must be > 0, got {r}")));
    }
    let om2 = match kind {
        RingType::Mill => params.alpha / params.beta / (r * r),
        RingType::Flock => 0.0,
    };
    let mut s = 0.0;
    for p in 1..n {
        let sn = (p as f64 * PI / n as f64).sin();
        let chord = 2.0 * r * sn;
        s += sn * (pot.deriv(chord)? - om2 * chord);
    }
    Ok(s)
}

/// Bisection on a sign-changing bracket until the bracket is narrower than `1e-12` (relative)
/// or the residual vanishes.
pub fn mill_radius_solve(
    pot: &RadialPotential,
    params: &ModelParams,
    n: usize,
    bracket: (f64, f64),
    kind: RingType,
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut flo = mill_radius_residual(pot, params, n, lo, kind)?;
    let fhi = mill_radius_residual(pot, params, n, hi, kind)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(SwarmError::NoSignChange { lo, hi });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-12 * mid.clamp(1e-3, 1.0) {
            break;
        }
        let fm = mill_radius_residual(pot, params, n, mid, kind)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All roots found by sampling the residual at 200 log-spaced radii in `[1e-2, 1e2]` and
/// refining each sign change, in increasing order.
pub fn mill_radius_roots(pot: &RadialPotential, params: &ModelParams, n: usize, kind: RingType) -> Result<Vec<f64>> {
    scan_roots(pot, params, n, kind, 1e-2, 1e2, 200)
}

pub fn scan_roots(
    pot: &RadialPotential,
    params: &ModelParams,
    n: usize,
    kind: RingType,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Result<Vec<f64>> {
    let step = (hi / lo).ln() / (samples - 1) as f64;
    let rs: Vec<f64> = (0..samples).map(|k| lo * (step * k as f64).exp()).collect();
    let mut vals = Vec::with_capacity(samples);
    for &r in &rs {
        vals.push(mill_radius_residual(pot, params, n, r, kind).ok());
    }
    let mut roots = Vec::new();
    for k in 0..samples - 1 {
        if let (Some(a), Some(b)) = (vals[k], vals[k + 1]) {
            if a == 0.0 {
                roots.push(rs[k]);
            } else if a.signum() != b.signum() && b != 0.0 {
                roots.push(mill_radius_solve(pot, params, n, (rs[k], rs[k + 1]), kind)?);
            }
        }
    }
    if let Some(Some(b)) = vals.last() {
        if *b == 0.0 {
            roots.push(rs[samples - 1]);
        }
    }
    Ok(roots)
}

/// Smallest ring radius found by the default scan.
pub fn solve_ring_radius(pot: &RadialPotential, params: &ModelParams, n: usize, kind: RingType) -> Result<f64> {
    mill_radius_roots(pot, params, n, kind)?
        .first()
        .copied()
        .ok_or(SwarmError::NoSignChange { lo: 1e-2, hi: 1e2 })
}
