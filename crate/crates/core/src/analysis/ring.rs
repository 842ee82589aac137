use std::f64::consts::TAU;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, SwarmState, Vec2};

/// `N` equispaced points on a circle, optionally rotating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub center: Vec2,
    #[serde(rename = "R")]
    pub radius: f64,
    /// Angular velocity; zero for flock rings.
    pub omega: f64,
    /// Phase `theta` of agent 0.
    pub phase: f64,
    /// `+1` counterclockwise, `-1` clockwise.
    pub orientation: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl RingSpec {
    /// Static ring (flock positions).
    pub fn flock(center: Vec2, radius: f64, phase: f64, n: usize) -> Self {
        RingSpec {
            center,
            radius,
            omega: 0.0,
            phase,
            orientation: 1.0,
            n,
        }
    }

    /// Mill ring with `omega = orientation * sqrt(alpha/beta) / R`.
    pub fn mill(center: Vec2, radius: f64, phase: f64, orientation: f64, params: &ModelParams) -> Self {
        RingSpec {
            center,
            radius,
            omega: orientation * params.cruise_speed() / radius,
            phase,
            orientation,
            n: params.n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(SwarmError::Param(format!("ring radius must be > 0, got {}", self.radius)));
        }
        if self.n == 0 {
            return Err(SwarmError::Param("ring needs at least one agent".into()));
        }
        if self.orientation != 1.0 && self.orientation != -1.0 {
            return Err(SwarmError::Param("orientation must be +1 or -1".into()));
        }
        Ok(())
    }
}

/// `x_i = c + R R_theta (cos(2 pi i/N), sin(2 pi i/N))`, `i = 0..N-1`.
pub fn ring_positions(spec: &RingSpec) -> Vec<Vec2> {
    (0..spec.n)
        .map(|i| spec.center + Vec2::polar(spec.radius, spec.phase + TAU * i as f64 / spec.n as f64))
        .collect()
}

/// Which velocity field to put on a ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingKind {
    /// All agents share `v_bar`.
    Flock { v_bar: Vec2 },
    /// Tangential velocities at cruise speed.
    Mill,
}

/// Positions from `ring_positions` with a flock or mill velocity field.
pub fn ring_state(spec: &RingSpec, params: &ModelParams, kind: RingKind) -> Result<SwarmState> {
    spec.validate()?;
    let x = ring_positions(spec);
    let c = params.cruise_speed();
    let v = match kind {
        RingKind::Flock { v_bar } => {
            if (v_bar.norm() - c).abs() > 1e-9 * c.max(1.0) {
                return Err(SwarmError::Param(format!(
                    "flock velocity has norm {} but the cruise speed is {c}",
                    v_bar.norm()
                )));
            }
            vec![v_bar; spec.n]
        }
        RingKind::Mill => x
            .iter()
            .map(|p| {
                let d = *p - spec.center;
                d.perp() * (spec.orientation * c / d.norm())
            })
            .collect(),
    };
    SwarmState::new(0.0, x, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_unit_points() {
        let x = ring_positions(&RingSpec::flock(Vec2::ZERO, 1.0, 0.0, 4));
        let want = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (p, (a, b)) in x.iter().zip(want) {
            assert!((*p - Vec2::new(a, b)).norm() < 1e-15);
        }
    }

    #[test]
    fn chords_and_centroid() {
        let spec = RingSpec::flock(Vec2::new(2.0, -1.0), 1.7, 0.3, 9);
        let x = ring_positions(&spec);
        let chord = 2.0 * 1.7 * (std::f64::consts::PI / 9.0).sin();
        for i in 0..9 {
            assert!(((x[i] - x[(i + 1) % 9]).norm() - chord).abs() < 1e-14);
        }
        assert!((crate::model::centroid(&x) - spec.center).norm() < 1e-14);
    }

    #[test]
    fn mill_velocities_are_tangential_at_cruise() {
        let params = ModelParams::new(10.0, 3.0, 1.0, 7).unwrap();
        let spec = RingSpec::mill(Vec2::new(1.0, 1.0), 2.0, 0.1, -1.0, &params);
        let s = ring_state(&spec, &params, RingKind::Mill).unwrap();
        for (x, v) in s.x.iter().zip(&s.v) {
            assert!((v.norm() - params.cruise_speed()).abs() < 1e-14);
            assert!(v.dot(*x - spec.center).abs() < 1e-14);
        }
        assert!(ring_state(&spec, &params, RingKind::Flock { v_bar: Vec2::new(1.0, 0.0) }).is_err());
    }
}
