use std::f64::consts::TAU;
use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::flock::{require_above_m_ab, settle_and_stop};
use super::runner::{PhaseRunner, PipelineOptions};
use super::tracking::{move_duration, PdAccel, RigidSpin};
use crate::analysis::mill_diagnostics_with;
use crate::controllers::{cancel_and_inject, mill_centripetal_clusters, StraightMoves};
use crate::dynamics::{Probe, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::{centroid, force_bounds, Bound, ModelParams, RadialPotential, SwarmState, Vec2};

/// One target mill: the listed agents rotate about `center` on radius `radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct MillCluster {
    pub center: Vec2,
    #[serde(rename = "R")]
    pub radius: f64,
    pub agents: Vec<usize>,
    /// `+1` counterclockwise, `-1` clockwise.
    #[serde(default = "ccw")]
    pub orientation: f64,
}

fn ccw() -> f64 {
    1.0
}

impl MillCluster {
    pub fn whole(center: Vec2, radius: f64, n: usize) -> Self {
        MillCluster {
            center,
            radius,
            agents: (0..n).collect(),
            orientation: 1.0,
        }
    }
}

fn check_clusters(clusters: &[MillCluster], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for c in clusters {
        if !(c.radius > 0.0) {
            return Err(SwarmError::Param(format!("mill radius must be > 0, got {}", c.radius)));
        }
        if c.orientation != 1.0 && c.orientation != -1.0 {
            return Err(SwarmError::Param("orientation must be +1 or -1".into()));
        }
        if c.agents.len() < 2 {
            return Err(SwarmError::Param("a mill cluster needs at least two agents".into()));
        }
        for &i in &c.agents {
            if i >= n || seen[i] {
                return Err(SwarmError::Param(format!("agent {i} is out of range or in two clusters")));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(SwarmError::Param("every agent must belong to a cluster".into()));
    }
    Ok(())
}

/// Requires `M > max(M_ab, M_F)`; an unbounded `M_F` only warns.
fn check_mill_budget(pot: &RadialPotential, params: &ModelParams) -> Result<()> {
    require_above_m_ab(params)?;
    match force_bounds(pot, 1.0, params.n).m_f {
        Bound::Finite(mf) if params.m <= mf => Err(SwarmError::ThresholdViolation {
            m: params.m,
            threshold: mf,
        }),
        Bound::Unbounded => {
            log::warn!("sup |U'| is unbounded for the {} potential; M cannot dominate it", pot.family_name());
            Ok(())
        }
        _ => Ok(()),
    }
}

/// True if every cluster is already a mill on its target circle.
pub fn is_mill_on(state: &SwarmState, params: &ModelParams, clusters: &[MillCluster]) -> bool {
    clusters.iter().all(|c| {
        let sub = state.select(&c.agents);
        let d = mill_diagnostics_with(&sub, params, Some(c.radius));
        let lz: f64 = sub.x.iter().zip(&sub.v).map(|(x, v)| (*x - c.center).cross(*v)).sum();
        d.max() < 1e-2 && (centroid(&sub.x) - c.center).norm() < 1e-2 * c.radius && lz * c.orientation > 0.0
    })
}

/// Per-agent `(center, radius, orientation)` arrays.
fn per_agent(clusters: &[MillCluster], n: usize) -> (Vec<Vec2>, Vec<f64>, Vec<f64>) {
    let mut centers = vec![Vec2::ZERO; n];
    let mut radii = vec![0.0; n];
    let mut orient = vec![1.0; n];
    for c in clusters {
        for &i in &c.agents {
            centers[i] = c.center;
            radii[i] = c.radius;
            orient[i] = c.orientation;
        }
    }
    (centers, radii, orient)
}

/// Slot positions: agents of each cluster keep their angular order about its center and are
/// spread evenly starting from the angle of the first one.
pub fn ring_targets(x: &[Vec2], clusters: &[MillCluster]) -> Vec<Vec2> {
    let mut out = x.to_vec();
    for c in clusters {
        let mut ang: Vec<(f64, usize)> = c.agents.iter().map(|&i| ((x[i] - c.center).angle(), i)).collect();
        ang.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let k = ang.len() as f64;
        let phase = ang[0].0;
        for (slot, &(_, i)) in ang.iter().enumerate() {
            out[i] = c.center + Vec2::polar(c.radius, phase + TAU * slot as f64 / k);
        }
    }
    out
}

/// Steer any initial state to a mill about `center` with radius `r_mill`.
pub fn mill_pipeline(
    init: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    center: Vec2,
    r_mill: f64,
    eps: f64,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    mill_pipeline_clusters(init, pot, params, &[MillCluster::whole(center, r_mill, init.n())], eps, opts)
}

/// Several disjoint mills at once.
///
/// Phases: `settle` and `kill` as for flocks, `place` (double-integrator moves onto the ring
/// slots), `spin` (rigid rotation at `nu c / R`), `mill` (centripetal law until the horizon;
/// speeds climb to cruise along the heteroclinic orbit while the circles are kept). A state
/// that already is the requested mill skips to `mill`.
pub fn mill_pipeline_clusters(
    init: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    clusters: &[MillCluster],
    eps: f64,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    opts.validate()?;
    check_clusters(clusters, init.n())?;
    check_mill_budget(pot, params)?;
    let (centers, radii, orient) = per_agent(clusters, init.n());
    let mut runner = PhaseRunner::with_options(init, pot, params, opts);
    if !is_mill_on(init, params, clusters) {
        settle_and_stop(&mut runner, eps, opts)?;
        place(&mut runner, clusters, opts)?;
        spin(&mut runner, &centers, &radii, &orient, opts)?;
    }
    let law = mill_centripetal_clusters(centers, radii)?;
    runner.run("mill", &law, None, opts.hold)?;
    Ok(runner.finish())
}

fn place(runner: &mut PhaseRunner, clusters: &[MillCluster], opts: &PipelineOptions) -> Result<()> {
    let s = runner.state().clone();
    let to = ring_targets(&s.x, clusters);
    let dmax = s.x.iter().zip(&to).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    let c = runner.params().cruise_speed();
    let duration = move_duration(dmax, 0.5 * c, opts.ramp);
    let path = StraightMoves {
        from: s.x.clone(),
        to: to.clone(),
        t0: s.t,
        duration,
    };
    let law = cancel_and_inject(
        PdAccel {
            reference: Arc::new(path),
            k1: opts.k1,
            k2: opts.k2,
        },
        runner.params().m,
    );
    let rmin = clusters.iter().map(|c| c.radius).fold(f64::INFINITY, f64::min);
    let t_done = s.t + duration - 0.5 * opts.dt;
    let tol = 1e-4 * rmin;
    let placed = |p: &Probe| {
        p.state.t >= t_done
            && p.state.x.iter().zip(&to).all(|(a, b)| (*a - *b).norm() < tol)
            && p.state.max_speed() < tol
    };
    let desc = format!("every agent within {tol:.1e} of its ring slot and at rest");
    runner.run("place", &law, Some((&desc, &placed)), duration + 50.0)?;
    Ok(())
}

/// Rigid rotation from rest at angular velocity `orientation * nu * c / R` on each circle.
pub(crate) fn spin(
    runner: &mut PhaseRunner,
    centers: &[Vec2],
    radii: &[f64],
    orient: &[f64],
    opts: &PipelineOptions,
) -> Result<()> {
    let c = runner.params().cruise_speed();
    let spin = RigidSpin {
        centers: centers.to_vec(),
        radii: radii.to_vec(),
        omega: radii.iter().zip(orient).map(|(r, o)| o * opts.nu * c / r).collect(),
        k1: opts.k1,
        k2: opts.k2,
    };
    let tol = 1e-4 * opts.nu * c;
    let spun = |p: &Probe| {
        (0..p.state.n()).all(|i| {
            let x = p.state.x[i];
            (p.state.v[i] - spin.target_velocity(i, x)).norm() < tol
                && ((x - spin.centers[i]).norm() - spin.radii[i]).abs() < tol
        })
    };
    let desc = format!("rigid rotation within {tol:.1e}");
    let law = cancel_and_inject(spin.clone(), runner.params().m);
    runner.run("spin", &law, Some((&desc, &spun)), 50.0 + opts.ramp)?;
    Ok(())
}
