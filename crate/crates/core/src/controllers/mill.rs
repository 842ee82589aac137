use crate::dynamics::{ControlLaw, LawContext};
use crate::error::{Result, SwarmError};
use crate::model::{centroid, ModelParams, Vec2, GUARD_RADIUS};

/// `u_i = F_i - (|v_i|^2 / R_i) (x_i - c_i)/|x_i - c_i|`.
///
/// Cancels the interaction and supplies the centripetal acceleration of circular motion of
/// radius `R_i` about `c_i`. Centers and radii are either shared or given per agent, which
/// covers several disjoint mills at once.
#[derive(Debug, Clone, PartialEq)]
pub struct MillCentripetal {
    pub centers: Vec<Vec2>,
    pub radii: Vec<f64>,
}

pub fn mill_centripetal(center: Vec2, radius: f64) -> Result<MillCentripetal> {
    mill_centripetal_clusters(vec![center], vec![radius])
}

/// Per-agent centers and radii (length `N`), or a single shared pair (length 1).
pub fn mill_centripetal_clusters(centers: Vec<Vec2>, radii: Vec<f64>) -> Result<MillCentripetal> {
    if centers.is_empty() || centers.len() != radii.len() {
        return Err(SwarmError::Param("mill centers and radii must be nonempty and equally long".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(SwarmError::Param("mill radii must be positive".into()));
    }
    Ok(MillCentripetal { centers, radii })
}

impl ControlLaw for MillCentripetal {
    fn name(&self) -> &str {
        "mill_centripetal"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        let shared = self.centers.len() == 1;
        if !shared && self.centers.len() != ctx.n() {
            return Err(SwarmError::Param(format!(
                "{} mill centers for {} agents",
                self.centers.len(),
                ctx.n()
            )));
        }
        for i in 0..ctx.n() {
            let k = if shared { 0 } else { i };
            let d = ctx.x[i] - self.centers[k];
            let r = d.norm();
            if r < GUARD_RADIUS {
                return Err(SwarmError::Degenerate(format!("agent {i} sits on its mill center")));
            }
            out[i] = ctx.forces[i] - d * (ctx.v[i].norm_sq() / (self.radii[k] * r));
        }
        Ok(())
    }
}

/// `u_i = -M (v_i - c (x_i - x_m)^perp / |x_i - x_m|)`, `x_m` the centroid and `c` the cruise
/// speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MillVelocityFeedback {
    pub m: f64,
    pub speed: f64,
    /// `+1` counterclockwise, `-1` clockwise.
    pub orientation: f64,
}

pub fn mill_velocity_feedback(m: f64, params: &ModelParams) -> MillVelocityFeedback {
    MillVelocityFeedback {
        m,
        speed: params.cruise_speed(),
        orientation: 1.0,
    }
}

impl ControlLaw for MillVelocityFeedback {
    fn name(&self) -> &str {
        "mill_velocity_feedback"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        let xm = centroid(ctx.x);
        for i in 0..ctx.n() {
            let d = ctx.x[i] - xm;
            let r = d.norm();
            if r < GUARD_RADIUS {
                return Err(SwarmError::Degenerate(format!("agent {i} sits on the centroid")));
            }
            let target = d.perp() * (self.orientation * self.speed / r);
            out[i] = (ctx.v[i] - target) * (-self.m);
        }
        Ok(())
    }
}
