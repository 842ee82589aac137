use serde::{Deserialize, Serialize};

use crate::model::{centroid, SwarmState};

/// Scalar summaries of a swarm state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameters {
    /// `|sum v_i| / sum |v_i|`.
    pub polarization: f64,
    /// `|sum (x_i - x_m)^perp . v_i| / sum |x_i - x_m| |v_i|`.
    pub ang_momentum: f64,
    /// `(1/N) sum |x_i - x_m|`.
    pub mean_radius: f64,
    /// `(1/N) sum |v_i|`.
    pub mean_speed: f64,
}

/// Order parameters; zero denominators give zero.
pub fn order_parameters(state: &SwarmState) -> OrderParameters {
    let n = state.n();
    if n == 0 {
        return OrderParameters {
            polarization: 0.0,
            ang_momentum: 0.0,
            mean_radius: 0.0,
            mean_speed: 0.0,
        };
    }
    let xm = centroid(&state.x);
    let mut vsum = crate::model::Vec2::ZERO;
    let mut speed_sum = 0.0;
    let mut radius_sum = 0.0;
    let mut lsum = 0.0;
    let mut lden = 0.0;
    for (x, v) in state.x.iter().zip(&state.v) {
        let d = *x - xm;
        let s = v.norm();
        let r = d.norm();
        vsum += *v;
        speed_sum += s;
        radius_sum += r;
        lsum += d.perp().dot(*v);
        lden += r * s;
    }
    let ratio = |num: f64, den: f64| if den > 0.0 { (num / den).min(1.0) } else { 0.0 };
    OrderParameters {
        polarization: ratio(vsum.norm(), speed_sum),
        ang_momentum: ratio(lsum.abs(), lden),
        mean_radius: radius_sum / n as f64,
        mean_speed: speed_sum / n as f64,
    }
}
