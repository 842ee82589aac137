use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::vec2::{centroid, Vec2};
use crate::error::{Result, SwarmError};

/// Positions and velocities of `N` planar agents at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SwarmState {
    pub t: f64,
    pub x: Vec<Vec2>,
    pub v: Vec<Vec2>,
}

impl SwarmState {
    pub fn new(t: f64, x: Vec<Vec2>, v: Vec<Vec2>) -> Result<Self> {
        let s = SwarmState { t, x, v };
        s.validate()?;
        Ok(s)
    }

    /// Agents at rest at the given positions.
    pub fn at_rest(t: f64, x: Vec<Vec2>) -> Self {
        let v = vec![Vec2::ZERO; x.len()];
        SwarmState { t, x, v }
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.len() != self.v.len() {
            return Err(SwarmError::Param(format!(
                "position and velocity arrays differ in length ({} vs {})",
                self.x.len(),
                self.v.len()
            )));
        }
        if !self.is_finite() {
            return Err(SwarmError::NonFinite { t: self.t });
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.iter().chain(self.v.iter()).all(|p| p.is_finite())
    }

    pub fn centroid(&self) -> Vec2 {
        centroid(&self.x)
    }

    pub fn mean_velocity(&self) -> Vec2 {
        centroid(&self.v)
    }

    pub fn max_speed(&self) -> f64 {
        super::vec2::sup_norm(&self.v)
    }

    /// Smallest pairwise distance, with the pair that attains it.
    pub fn min_pair_distance(&self) -> (f64, usize, usize) {
        min_pair_distance(&self.x)
    }

    /// Apply a rigid motion `x -> R_theta x + b`, `v -> R_theta v`.
    pub fn rigid_transform(&self, theta: f64, b: Vec2) -> SwarmState {
        SwarmState {
            t: self.t,
            x: self.x.iter().map(|p| p.rotate(theta) + b).collect(),
            v: self.v.iter().map(|p| p.rotate(theta)).collect(),
        }
    }

    /// Sub-state made of the listed agents.
    pub fn select(&self, idx: &[usize]) -> SwarmState {
        SwarmState {
            t: self.t,
            x: idx.iter().map(|&i| self.x[i]).collect(),
            v: idx.iter().map(|&i| self.v[i]).collect(),
        }
    }
}

/// Smallest pairwise distance among `x`, with the pair that attains it.
/// Returns `(inf, 0, 0)` for fewer than two points.
pub fn min_pair_distance(x: &[Vec2]) -> (f64, usize, usize) {
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d = (x[i] - x[j]).norm();
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_mismatch_rejected() {
        let e = SwarmState::new(0.0, vec![Vec2::ZERO; 2], vec![Vec2::ZERO; 3]);
        assert!(matches!(e, Err(SwarmError::Param(_))));
        let e = SwarmState::new(0.0, vec![Vec2::new(f64::NAN, 0.0)], vec![Vec2::ZERO]);
        assert!(matches!(e, Err(SwarmError::NonFinite { .. })));
    }

    #[test]
    fn min_distance_pair() {
        let s = SwarmState::at_rest(
            0.0,
            vec![Vec2::new(0.0, 0.0), Vec2::new(3.0, 0.0), Vec2::new(3.5, 0.0)],
        );
        let (d, i, j) = s.min_pair_distance();
        assert_eq!((d, i, j), (0.5, 1, 2));
    }
}
