use serde::Serialize;

use super::gmatrix::first_order_g;
use super::linear::{char_coeffs, routh_hurwitz_stable};
use super::mill_radius::{mill_radius_roots, RingType};
use super::reduced::{mill_linearization_matrix, Mat3, PhiConvention};
use super::ring::{ring_positions, RingSpec};
use crate::error::{Result, SwarmError};
use crate::model::{ModelParams, RadialPotential, Vec2};

/// Mill radius and stability summary of one `(potential, params)` pair.
///
/// The linear analysis uses the smallest mill root. `G` is evaluated on the flock ring of the
/// smallest flock root, the stationary configuration the first-order system linearizes about;
/// those fields are `None` when no flock ring exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "R_roots")]
    pub r_roots: Vec<f64>,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "A")]
    pub a: Mat3,
    /// `[a2, a1, a0]` of `l^3 + a2 l^2 + a1 l + a0`.
    pub char_coeffs: [f64; 3],
    pub margins: [f64; 3],
    pub stable: bool,
    #[serde(rename = "R_flock")]
    pub r_flock: Option<f64>,
    #[serde(rename = "G_zero_count")]
    pub g_zero_count: Option<usize>,
    #[serde(rename = "G_max_nonzero_real")]
    pub g_max_nonzero_real: Option<f64>,
}

pub fn analysis_report(pot: &RadialPotential, params: &ModelParams) -> Result<AnalysisReport> {
    let n = params.n;
    let r_roots = mill_radius_roots(pot, params, n, RingType::Mill)?;
    let radius = *r_roots.first().ok_or(SwarmError::NoSignChange { lo: 1e-2, hi: 1e2 })?;
    let a = mill_linearization_matrix(pot, params, radius, PhiConvention::Chord)?;
    let (a2, a1, a0) = char_coeffs(&a);
    let rh = routh_hurwitz_stable(a2, a1, a0);
    let r_flock = mill_radius_roots(pot, params, n, RingType::Flock)?.first().copied();
    let (g_zero_count, g_max_nonzero_real) = match r_flock {
        Some(r) => {
            let g = first_order_g(pot, &ring_positions(&RingSpec::flock(Vec2::ZERO, r, 0.0, n)))?;
            (Some(g.zero_count), g.max_nonzero)
        }
        None => (None, None),
    };
    Ok(AnalysisReport {
        n,
        r_roots,
        radius,
        a,
        char_coeffs: [a2, a1, a0],
        margins: rh.margins,
        stable: rh.stable,
        r_flock,
        g_zero_count,
        g_max_nonzero_real,
    })
}
