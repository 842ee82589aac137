use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ControlLaw, LawContext};
use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct JqParams {
    pub gamma: f64,
}

impl JqParams {
    /// `factor` times the smallest admissible `gamma`.
    pub fn above_bound(params: &ModelParams, factor: f64) -> Self {
        JqParams {
            gamma: factor * gamma_lower_bound(params),
        }
    }
}

/// `max(1, sqrt(alpha^3/beta) / M)`.
pub fn gamma_lower_bound(params: &ModelParams) -> f64 {
    f64::max(1.0, (params.alpha.powi(3) / params.beta).sqrt() / params.m)
}

/// Energy-dissipating saturated feedback, applied agent by agent as a function of `v_i` only:
///
/// ```text
/// u = 0                              |v| >= 2 a2
/// u = -M v^ (2 - |v|/a2)             a2 < |v| < 2 a2
/// u = -M v^                          a1 <= |v| <= a2
/// u = -(M gamma / c) v               |v| < a1
/// ```
///
/// with `c = sqrt(alpha/beta)`, `a1 = c/gamma`, `a2 = gamma c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JqFeedback {
    m: f64,
    gamma: f64,
    a1: f64,
    a2: f64,
    slope: f64,
}

pub fn jq_feedback(params: &ModelParams, jq: JqParams) -> Result<JqFeedback> {
    let lb = gamma_lower_bound(params);
    if !(jq.gamma > lb) {
        return Err(SwarmError::Param(format!(
            "gamma = {} must exceed max(1, sqrt(alpha^3/beta)/M) = {lb}",
            jq.gamma
        )));
    }
    let c = params.cruise_speed();
    Ok(JqFeedback {
        m: params.m,
        gamma: jq.gamma,
        a1: c / jq.gamma,
        a2: jq.gamma * c,
        slope: params.m * jq.gamma / c,
    })
}

impl JqFeedback {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Branch breakpoints `(a1, a2)`.
    pub fn breakpoints(&self) -> (f64, f64) {
        (self.a1, self.a2)
    }

    /// The control for one agent with velocity `v`.
    #[inline]
    pub fn control(&self, v: Vec2) -> Vec2 {
        let s = v.norm();
        if s < self.a1 {
            v * (-self.slope)
        } else if s <= self.a2 {
            v * (-self.m / s)
        } else if s < 2.0 * self.a2 {
            v * (-self.m * (2.0 - s / self.a2) / s)
        } else {
            Vec2::ZERO
        }
    }
}

impl ControlLaw for JqFeedback {
    fn name(&self) -> &str {
        "jq_feedback"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        for (o, v) in out.iter_mut().zip(ctx.v) {
            *o = self.control(*v);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law() -> JqFeedback {
        let p = ModelParams::new(2.0, 1.5, 3.0, 2).unwrap();
        jq_feedback(&p, JqParams::above_bound(&p, 1.5)).unwrap()
    }

    #[test]
    fn zero_velocity_gives_zero_control() {
        assert_eq!(law().control(Vec2::ZERO), Vec2::ZERO);
    }

    #[test]
    fn continuous_at_breakpoints() {
        let l = law();
        let (a1, a2) = l.breakpoints();
        for k in 0..16 {
            let e = Vec2::polar(1.0, k as f64 * 0.4);
            for b in [a1, a2, 2.0 * a2] {
                let below = l.control(e * (b * (1.0 - 1e-14)));
                let at = l.control(e * b);
                let above = l.control(e * (b * (1.0 + 1e-14)));
                assert!((below - at).norm() < 1e-12 && (above - at).norm() < 1e-12, "break at {b}");
            }
            assert!((l.control(e * a1).norm() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_bound_enforced() {
        let p = ModelParams::new(2.0, 1.5, 3.0, 2).unwrap();
        assert!(jq_feedback(&p, JqParams { gamma: 1.0 }).is_err());
        assert!(jq_feedback(&p, JqParams { gamma: 1.01 }).is_ok());
        let weak = ModelParams::new(2.0, 1.5, 0.5, 2).unwrap();
        let lb = gamma_lower_bound(&weak);
        assert!((lb - (8.0f64 / 1.5).sqrt() / 0.5).abs() < 1e-12);
        assert!(jq_feedback(&weak, JqParams { gamma: lb }).is_err());
    }
}
