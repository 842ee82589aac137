use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};

/// Self-propulsion, friction, control bound and swarm size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, m: f64, n: usize) -> Result<Self> {
        let p = ModelParams { alpha, beta, m, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(SwarmError::Param(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(SwarmError::Param(format!("beta must be > 0, got {}", self.beta)));
        }
        if !(self.m > 0.0) || self.m.is_nan() {
            return Err(SwarmError::Param(format!("M must be > 0, got {}", self.m)));
        }
        if self.n < 2 {
            return Err(SwarmError::Param(format!("N must be >= 2, got {}", self.n)));
        }
        Ok(())
    }

    /// Cruise speed `sqrt(alpha/beta)`.
    #[inline]
    pub fn cruise_speed(&self) -> f64 {
        (self.alpha / self.beta).sqrt()
    }

    /// Self-propulsion term `(alpha - beta |v|^2) v` as a scalar factor.
    #[inline]
    pub fn propulsion_factor(&self, speed_sq: f64) -> f64 {
        self.alpha - self.beta * speed_sq
    }

    /// Same parameters with another control bound.
    pub fn with_m(&self, m: f64) -> Self {
        ModelParams { m, ..*self }
    }

    /// Same parameters with another agent count.
    pub fn with_n(&self, n: usize) -> Self {
        ModelParams { n, ..*self }
    }
}

/// `M_{alpha,beta} = sqrt(4 alpha^3 / (27 beta))`, the maximum of `alpha s - beta s^3` over `s >= 0`.
pub fn threshold_m_alpha_beta(params: &ModelParams) -> f64 {
    (4.0 * params.alpha.powi(3) / (27.0 * params.beta)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_max(alpha: f64, beta: f64) -> f64 {
        let smax = 2.0 * (alpha / beta).sqrt() + 1.0;
        let n = 2_000_000;
        (0..=n)
            .map(|k| {
                let s = smax * k as f64 / n as f64;
                alpha * s - beta * s * s * s
            })
            .fold(f64::MIN, f64::max)
    }

    #[test]
    fn threshold_values() {
        let p = |a, b| ModelParams::new(a, b, 1.0, 2).unwrap();
        assert_eq!(threshold_m_alpha_beta(&p(0.0, 1.0)), 0.0);
        let t = threshold_m_alpha_beta(&p(2.0, 1.5));
        assert!((t - (32.0f64 / 40.5).sqrt()).abs() < 1e-15);
        assert!((t - grid_max(2.0, 1.5)).abs() < 1e-8);
        // maximizer s* = sqrt(alpha/(3 beta)) = 0.5 for alpha = 3, beta = 4
        let s = 0.5;
        assert!((threshold_m_alpha_beta(&p(3.0, 4.0)) - (3.0 * s - 4.0 * s * s * s)).abs() < 1e-15);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ModelParams::new(1.0, 0.0, 1.0, 2).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, 2).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1).is_err());
        assert!(ModelParams::new(-1.0, 1.0, 1.0, 3).is_err());
    }

    #[test]
    fn config_keys() {
        let p: ModelParams = serde_json::from_str(r#"{"alpha":2,"beta":1.5,"M":3,"N":10}"#).unwrap();
        assert_eq!(p, ModelParams::new(2.0, 1.5, 3.0, 10).unwrap());
    }
}
