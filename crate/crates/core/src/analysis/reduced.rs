use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, RadialPotential};

/// How the chord length enters `phi`.
///
/// `Chord` uses the true distance `2(R+r) sin(pi j/N)` between ring agents, which makes the mill
/// radius a fixed point with `phi(0) R = alpha/beta`. `AsPrinted` drops the factor 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiConvention {
    #[default]
    Chord,
    AsPrinted,
}

/// `phi(r) = (1/N) sum_{j=1}^{N-1} sin(pi j/N) U'(k (R+r) sin(pi j/N))` with `k = 2` for chords.
pub fn phi_of_r(pot: &RadialPotential, n: usize, radius: f64, r: f64, conv: PhiConvention) -> Result<f64> {
    let k = match conv {
        PhiConvention::Chord => 2.0,
        PhiConvention::AsPrinted => 1.0,
    };
    let rr = radius + r;
    if !(rr > 0.0) {
        return Err(SwarmError::Domain(format!("perturbed radius R+r must be > 0, got {rr}")));
    }
    let mut s = 0.0;
    for j in 1..n {
        let sn = (PI * j as f64 / n as f64).sin();
        s += sn * pot.deriv(k * rr * sn)?;
    }
    Ok(s / n as f64)
}

/// Central difference for `phi'(0)` with step `1e-6 max(1, R)`.
pub fn phi_prime_fd(pot: &RadialPotential, n: usize, radius: f64, conv: PhiConvention) -> Result<f64> {
    let h = 1e-6 * radius.max(1.0);
    Ok((phi_of_r(pot, n, radius, h, conv)? - phi_of_r(pot, n, radius, -h, conv)?) / (2.0 * h))
}

/// Exact `phi'(0)` for `U(r) = r^a/a - r^b/b` under the chord convention:
/// `(2/N) sum sin^2(pi j/N) U''(2R sin(pi j/N))`.
pub fn phi_prime_power_law(a: f64, b: f64, n: usize, radius: f64) -> f64 {
    let mut s = 0.0;
    for j in 1..n {
        let sn = (PI * j as f64 / n as f64).sin();
        let d = 2.0 * radius * sn;
        s += sn * sn * ((a - 1.0) * d.powf(a - 2.0) - (b - 1.0) * d.powf(b - 2.0));
    }
    2.0 * s / n as f64
}

/// Ring perturbation coordinates: radial offset `r`, heading angle `gamma`, speed offset `w`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReducedState {
    pub r: f64,
    pub gamma: f64,
    pub w: f64,
}

/// Symmetric-ring dynamics around a mill of radius `R`.
pub fn reduced_mill_rhs(
    pot: &RadialPotential,
    params: &ModelParams,
    radius: f64,
    s: ReducedState,
    conv: PhiConvention,
) -> Result<ReducedState> {
    let c = params.cruise_speed();
    let speed = c + s.w;
    if !(speed > 0.0) {
        return Err(SwarmError::Domain(format!("speed c+w must stay positive, got {speed}")));
    }
    let phi = phi_of_r(pot, params.n, radius, s.r, conv)?;
    let (sg, cg) = s.gamma.sin_cos();
    let ab = (params.alpha * params.beta).sqrt();
    Ok(ReducedState {
        r: speed * sg,
        gamma: (speed / (radius + s.r) - phi / speed) * cg,
        w: -(2.0 * ab * s.w + params.beta * s.w * s.w) * speed - phi * sg,
    })
}

/// Fixed-step RK4 of the reduced system, returning samples every step.
pub fn integrate_reduced(
    pot: &RadialPotential,
    params: &ModelParams,
    radius: f64,
    init: ReducedState,
    dt: f64,
    steps: usize,
    conv: PhiConvention,
) -> Result<Vec<ReducedState>> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = init;
    out.push(s);
    let add = |a: ReducedState, k: ReducedState, h: f64| ReducedState {
        r: a.r + h * k.r,
        gamma: a.gamma + h * k.gamma,
        w: a.w + h * k.w,
    };
    for _ in 0..steps {
        let k1 = reduced_mill_rhs(pot, params, radius, s, conv)?;
        let k2 = reduced_mill_rhs(pot, params, radius, add(s, k1, dt / 2.0), conv)?;
        let k3 = reduced_mill_rhs(pot, params, radius, add(s, k2, dt / 2.0), conv)?;
        let k4 = reduced_mill_rhs(pot, params, radius, add(s, k3, dt), conv)?;
        s = ReducedState {
            r: s.r + dt / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
            gamma: s.gamma + dt / 6.0 * (k1.gamma + 2.0 * k2.gamma + 2.0 * k3.gamma + k4.gamma),
            w: s.w + dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
        };
        if !(s.r.is_finite() && s.gamma.is_finite() && s.w.is_finite()) {
            return Err(SwarmError::NonFinite { t: dt * out.len() as f64 });
        }
        out.push(s);
    }
    Ok(out)
}

pub type Mat3 = [[f64; 3]; 3];

/// Jacobian of the reduced system at the origin, in `(r, gamma, w)` order:
/// `[[0, c, 0], [-omega/R - phi'(0)/c, 0, 2/R], [0, -phi(0), -2 alpha]]` with `omega = c/R`.
pub fn mill_linearization_matrix(
    pot: &RadialPotential,
    params: &ModelParams,
    radius: f64,
    conv: PhiConvention,
) -> Result<Mat3> {
    let c = params.cruise_speed();
    let omega = c / radius;
    let phi0 = phi_of_r(pot, params.n, radius, 0.0, conv)?;
    let dphi = phi_prime_fd(pot, params.n, radius, conv)?;
    Ok([
        [0.0, c, 0.0],
        [-omega / radius - dphi / c, 0.0, 2.0 / radius],
        [0.0, -phi0, -2.0 * params.alpha],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::mill_radius::{solve_ring_radius, RingType};

    #[test]
    fn phi_at_mill_radius_matches_centripetal() {
        let pot = RadialPotential::power_law(4.0, 1.0);
        let params = ModelParams::new(10.0, 3.0, 1.0, 8).unwrap();
        let r = solve_ring_radius(&pot, &params, 8, RingType::Mill).unwrap();
        let phi = phi_of_r(&pot, 8, r, 0.0, PhiConvention::Chord).unwrap();
        assert!((phi * r - 10.0 / 3.0).abs() < 1e-9);
        let s = reduced_mill_rhs(&pot, &params, r, ReducedState::default(), PhiConvention::Chord).unwrap();
        assert!(s.r.abs() < 1e-12 && s.gamma.abs() < 1e-9 && s.w.abs() < 1e-12);
    }

    #[test]
    fn fd_matches_exact_derivative() {
        let pot = RadialPotential::power_law(4.0, 1.0);
        for n in [2, 5, 20] {
            let fd = phi_prime_fd(&pot, n, 1.1, PhiConvention::Chord).unwrap();
            let ex = phi_prime_power_law(4.0, 1.0, n, 1.1);
            assert!((fd - ex).abs() < 1e-6 * ex.abs().max(1.0), "{n}: {fd} vs {ex}");
        }
    }
}
