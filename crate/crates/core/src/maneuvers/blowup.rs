use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use rand::Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::flock::diameter;
use super::mill::spin;
use super::geometry::outer_vertex;
use super::runner::{PhaseRunner, PipelineOptions};
use super::tracking::{move_duration, ArcMoves, SingleMove};
use crate::analysis::{ring_positions, RingSpec};
use crate::controllers::{
    build_repulsive_surrogate, fictitious_potential_control, jq_feedback, mill_centripetal_clusters, pd_tracking,
    surrogate_cutoff_radius,
    surrogate_forces_into, velocity_kill, JqParams, RefSample, ReferencePath, RingMotion, RingPath,
};
use crate::dynamics::{rng_from_seed, Probe, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::bounds::sampled_sup;
use crate::model::{centroid, min_pair_distance, threshold_m_alpha_beta, ModelParams, RadialPotential, SwarmState, Vec2};

/// Peak radial speed of a default ring shrink, as a fraction of the cruise speed.
pub const SHRINK_RATE: f64 = 0.05;

/// Tolerance of the spreading phase: speeds and surrogate forces below it.
pub const SPREAD_TOL: f64 = 1e-2;

/// Blow a swarm apart until every pairwise distance exceeds `big_l`.
///
/// Phases: `spread` (JQ under the repulsive surrogate potential), `kill`, then one
/// `extract:<agent>` phase per agent except the last: the current outer hull vertex is pushed
/// along its outward bisector while everyone else is held. Extraction lengths follow
/// `E_last = L + 2 rho`, `E_(k-1) = 3 E_k + rho` (`rho` the diameter after spreading) so that
/// the moved agent's nearest neighbour is always among the remaining ones.
pub fn blowup_pipeline(
    init: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    eta: f64,
    big_l: f64,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    opts.validate()?;
    if !(big_l > 0.0 && eta > 0.0) {
        return Err(SwarmError::Param(format!("blow-up needs L, eta > 0, got {big_l}, {eta}")));
    }
    if !(pot.deriv_unchecked(1e-6) < 0.0) {
        return Err(SwarmError::Param(format!(
            "the {} potential is not repulsive at 0",
            pot.family_name()
        )));
    }
    let r0 = surrogate_cutoff_radius(pot, eta, 1.0)?;
    let sur = build_repulsive_surrogate(pot, eta, r0)?;
    let budget = threshold_m_alpha_beta(params) + sur.deviation_bound();
    if params.m <= budget {
        log::warn!("M = {} is below the blow-up budget {budget:.4}", params.m);
    }
    let n = init.n();
    let mut runner = PhaseRunner::with_options(init, pot, params, opts);
    let c = params.cruise_speed();

    if n >= 2 {
        let jq = jq_feedback(params, JqParams::above_bound(params, opts.jq_factor))?;
        let sur_arc = Arc::new(sur);
        let law = fictitious_potential_control(sur_arc.clone(), jq);
        let spread = |p: &Probe| {
            if p.state.max_speed() >= SPREAD_TOL {
                return false;
            }
            let mut g = vec![Vec2::ZERO; p.state.n()];
            surrogate_forces_into(sur_arc.as_ref(), &p.state.x, &mut g).is_ok()
                && g.iter().all(|f| f.norm() < SPREAD_TOL)
        };
        let desc = format!("max speed and max surrogate force < {SPREAD_TOL}");
        runner.run("spread", &law, Some((&desc, &spread)), opts.phase_cap)?;

        let eta_k = 0.5 * SPREAD_TOL;
        let kill = velocity_kill(eta_k, opts.dt)?;
        let stop_v = kill.threshold();
        let stopped = |p: &Probe| p.state.max_speed() <= stop_v;
        let cap = runner.state().max_speed() / eta_k + 10.0;
        runner.run("kill", &kill, Some((&format!("max speed <= {stop_v:.3e}"), &stopped)), cap)?;
    }

    let rho = diameter(&runner.state().x);
    let mut lengths = vec![0.0; n.saturating_sub(1)];
    for k in (0..lengths.len()).rev() {
        lengths[k] = if k + 1 == lengths.len() {
            big_l + 2.0 * rho
        } else {
            3.0 * lengths[k + 1] + rho
        };
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    for len in lengths {
        let s = runner.state().clone();
        let pts: Vec<Vec2> = remaining.iter().map(|&i| s.x[i]).collect();
        let ov = outer_vertex(&pts)?;
        let agent = remaining[ov.index];
        let to = s.x[agent] + ov.bisector * len;
        let duration = move_duration(len, 0.5 * c, opts.ramp);
        let path = SingleMove {
            hold: s.x.clone(),
            agent,
            to,
            t0: s.t,
            duration,
        };
        let law = pd_tracking(Arc::new(path), opts.k1, opts.k2)?.named("extract");
        let t_done = s.t + duration - 0.5 * opts.dt;
        let tol = 1e-6 * len.max(1.0);
        let arrived = |p: &Probe| {
            p.state.t >= t_done && (p.state.x[agent] - to).norm() < tol && p.state.max_speed() < 1e-6
        };
        let desc = format!("agent {agent} within {tol:.1e} of its target and all at rest");
        runner.run(&format!("extract:{agent}"), &law, Some((&desc, &arrived)), duration + 100.0)?;
        remaining.remove(ov.index);
    }
    Ok(runner.finish())
}

/// Distance audit of one extraction phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractionAudit {
    pub agent: usize,
    pub start: f64,
    pub end: f64,
    /// Largest drop of the moved agent's nearest-neighbour distance between consecutive samples.
    pub max_decrease: f64,
}

pub fn extraction_audit(traj: &Trajectory) -> Vec<ExtractionAudit> {
    traj.phases
        .iter()
        .filter_map(|p| {
            let agent: usize = p.name.strip_prefix("extract:")?.parse().ok()?;
            let nearest = |s: &SwarmState| {
                (0..s.n())
                    .filter(|&j| j != agent)
                    .map(|j| (s.x[j] - s.x[agent]).norm())
                    .fold(f64::INFINITY, f64::min)
            };
            let d: Vec<f64> = (p.first_sample..=p.last_sample).map(|k| nearest(&traj.states[k])).collect();
            let max_decrease = d.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
            Some(ExtractionAudit {
                agent,
                start: d[0],
                end: *d.last().unwrap(),
                max_decrease,
            })
        })
        .collect()
}

/// Outcome of [`circular_placement`].
#[derive(Debug, Clone)]
pub struct Placement {
    pub trajectory: Trajectory,
    pub center: Vec2,
    pub radius: f64,
    /// Angle of slot 0.
    pub phase: f64,
    /// `order[k]` is the agent that ends in slot `k` of `ring_positions`.
    pub order: Vec<usize>,
    /// Smallest pairwise angle about `center` at the start.
    pub theta_min: f64,
}

impl Placement {
    pub fn ring(&self) -> RingSpec {
        RingSpec::flock(self.center, self.radius, self.phase, self.order.len())
    }
}

/// Radius a placement about `center` needs: above `L / sin(theta_min)` (theta capped at
/// `pi/2`) and not inside the swarm.
fn required_radius(x: &[Vec2], center: Vec2, big_l: f64) -> f64 {
    let theta = min_angular_separation(x, center);
    let rmax = x.iter().map(|p| (*p - center).norm()).fold(0.0, f64::max);
    (big_l / theta.min(FRAC_PI_2).sin()).max(rmax)
}

/// A point off every line through two agents, cleared by `1e-6 * scale`.
///
/// Candidates are the centroid and random perturbations of it (up to half the swarm diameter
/// in each coordinate); among the first 256 clear ones the point needing the smallest placement
/// radius for separation `big_l` wins, earlier candidates on ties.
pub fn pick_center(x: &[Vec2], big_l: f64, seed: u64) -> Result<Vec2> {
    const CANDIDATES: usize = 256;
    let scale = diameter(x).max(1.0);
    let m = centroid(x);
    let clear = |p: Vec2| {
        for i in 0..x.len() {
            if (p - x[i]).norm() < 1e-6 * scale {
                return false;
            }
            for j in i + 1..x.len() {
                let d = x[j] - x[i];
                let dist = d.cross(p - x[i]).abs() / d.norm();
                if dist < 1e-6 * scale {
                    return false;
                }
            }
        }
        true
    };
    let mut best: Option<(f64, Vec2)> = None;
    let mut found = 0;
    let mut consider = |p: Vec2| {
        let r = required_radius(x, p, big_l);
        if best.is_none_or(|(b, _)| r < b) {
            best = Some((r, p));
        }
    };
    if clear(m) {
        consider(m);
        found += 1;
    }
    let mut rng = rng_from_seed(seed);
    let mut trials = 0;
    while found < CANDIDATES && trials < 1_000_000 {
        trials += 1;
        let p = m + Vec2::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)) * scale;
        if clear(p) {
            consider(p);
            found += 1;
        }
    }
    best.map(|b| b.1)
        .ok_or_else(|| SwarmError::Geometry("no center off all pair lines within 10^6 trials".into()))
}

/// Smallest angle between `x_i - center` and `x_j - center` over all pairs.
pub fn min_angular_separation(x: &[Vec2], center: Vec2) -> f64 {
    let mut th = PI;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            th = th.min((x[i] - center).angle_to(x[j] - center).abs());
        }
    }
    th
}

/// Move agents that are more than `big_l` apart onto an equidistributed circle of radius `R`.
///
/// First radial moves, farthest agent first, each agent alone (`radial:<agent>`); then every
/// angle is interpolated to its slot at once (`equidistribute`). With `R > L / sin(theta)`,
/// `theta` the smallest pairwise angle about the center (capped at `pi/2`), no pairwise distance
/// drops below `L` on the way.
pub fn circular_placement(
    state: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    radius: f64,
    big_l: f64,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<Placement> {
    opts.validate()?;
    let n = state.n();
    let (dmin, i, j) = min_pair_distance(&state.x);
    if n >= 2 && !(dmin > big_l) {
        return Err(SwarmError::Geometry(format!(
            "agents {i} and {j} are {dmin:.4} apart, not more than L = {big_l}"
        )));
    }
    let center = pick_center(&state.x, big_l, seed)?;
    let theta_min = min_angular_separation(&state.x, center);
    let need = big_l / theta_min.min(FRAC_PI_2).sin();
    if !(radius > need) {
        return Err(SwarmError::Geometry(format!(
            "R = {radius} must exceed L / sin(theta_min) = {need:.4} (theta_min = {theta_min:.4})"
        )));
    }
    let rmax = state.x.iter().map(|p| (*p - center).norm()).fold(0.0, f64::max);
    if !(radius >= rmax) {
        return Err(SwarmError::Geometry(format!(
            "R = {radius} is inside the swarm (farthest agent at {rmax:.4})"
        )));
    }
    let c = params.cruise_speed();
    let mut runner = PhaseRunner::with_options(state, pot, params, opts);

    let mut by_dist: Vec<usize> = (0..n).collect();
    by_dist.sort_by(|&a, &b| {
        let da = (state.x[a] - center).norm();
        let db = (state.x[b] - center).norm();
        db.total_cmp(&da).then(a.cmp(&b))
    });
    for agent in by_dist {
        let s = runner.state().clone();
        let d = s.x[agent] - center;
        let to = center + d * (radius / d.norm());
        let len = (to - s.x[agent]).norm();
        if len < 1e-12 {
            continue;
        }
        let duration = move_duration(len, 0.5 * c, opts.ramp);
        let path = SingleMove {
            hold: s.x.clone(),
            agent,
            to,
            t0: s.t,
            duration,
        };
        hold_path(&mut runner, &format!("radial:{agent}"), Arc::new(path), &[(agent, to)], s.t + duration, opts)?;
    }

    let s = runner.state().clone();
    let mut ang: Vec<(f64, usize)> = s.x.iter().enumerate().map(|(i, p)| ((*p - center).angle(), i)).collect();
    ang.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let phase = ang[0].0;
    let order: Vec<usize> = ang.iter().map(|a| a.1).collect();
    let mut from = vec![0.0; n];
    let mut to = vec![0.0; n];
    for (k, &(a, i)) in ang.iter().enumerate() {
        from[i] = a;
        to[i] = phase + TAU * k as f64 / n as f64;
    }
    let sweep = from.iter().zip(&to).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if sweep > 1e-12 {
        let duration = move_duration(radius * sweep, 0.5 * c, opts.ramp);
        let path = ArcMoves {
            center,
            radius,
            from,
            to: to.clone(),
            t0: s.t,
            duration,
        };
        let targets: Vec<(usize, Vec2)> = (0..n).map(|i| (i, center + Vec2::polar(radius, to[i]))).collect();
        hold_path(&mut runner, "equidistribute", Arc::new(path), &targets, s.t + duration, opts)?;
    }
    Ok(Placement {
        trajectory: runner.finish(),
        center,
        radius,
        phase,
        order,
        theta_min,
    })
}

/// Track `path` with full cancellation until `t_end`, then until the listed targets are reached
/// and everyone is at rest.
fn hold_path(
    runner: &mut PhaseRunner,
    name: &str,
    path: Arc<dyn ReferencePath>,
    targets: &[(usize, Vec2)],
    t_end: f64,
    opts: &PipelineOptions,
) -> Result<()> {
    let law = pd_tracking(path, opts.k1, opts.k2)?.named(name.split(':').next().unwrap_or(name));
    let t_done = t_end - 0.5 * opts.dt;
    let scale = targets.iter().map(|(_, p)| p.norm()).fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    let reached = |p: &Probe| {
        p.state.t >= t_done
            && targets.iter().all(|(i, q)| (p.state.x[*i] - *q).norm() < tol)
            && p.state.max_speed() < 1e-9 * scale
    };
    let desc = format!("targets within {tol:.1e} and at rest");
    let duration = t_end - runner.state().t + 100.0;
    runner.run(name, &law, Some((&desc, &reached)), duration)?;
    Ok(())
}

/// Which ring to deform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum RingKindTag {
    Flock,
    Mill,
}

/// `sup |U'(r)|` over the chords of a ring no smaller than `r_bar`, plus `alpha / (beta r_bar)`
/// for mills. Chords range over `[2 sin(pi/N) r_bar, 2 r_max]`.
pub fn shrink_budget(
    pot: &RadialPotential,
    params: &ModelParams,
    kind: RingKindTag,
    r_bar: f64,
    r_max: f64,
) -> f64 {
    let n = params.n.max(2) as f64;
    let lo = 2.0 * (PI / n).sin() * r_bar * (1.0 - 1e-9);
    let hi = (2.0 * r_max).max(lo * 1.000001);
    let f = |r: f64| pot.deriv_unchecked(r).abs();
    let mut b = if matches!(pot, RadialPotential::None) { 0.0 } else { sampled_sup(&f, lo, hi) };
    if kind == RingKindTag::Mill {
        b += params.alpha / (params.beta * r_bar);
    }
    b
}

/// Ring slot of every agent, read off the angles about the centroid with agent 0 in slot 0.
fn ring_slots(x: &[Vec2], center: Vec2, phase: f64) -> Option<Vec<usize>> {
    let n = x.len();
    let mut taken = vec![false; n];
    let mut slots = Vec::with_capacity(n);
    for p in x {
        let a = ((*p - center).angle() - phase).rem_euclid(TAU);
        let k = (a / (TAU / n as f64)).round() as usize % n;
        if taken[k] {
            return None;
        }
        taken[k] = true;
        slots.push(k);
    }
    Some(slots)
}

/// Change the radius of a flock ring or a mill ring from `r_from` to `r_to` over `duration`
/// by PD tracking of the interpolated ring, then keep tracking for `opts.hold`.
///
/// Fails before running if the budget exceeds `M`, and afterwards if the largest requested
/// control exceeds the budget by more than 10%.
#[allow(clippy::too_many_arguments)]
pub fn radius_shrink(
    state: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    kind: RingKindTag,
    r_from: f64,
    r_to: f64,
    duration: f64,
    r_bar: f64,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    opts.validate()?;
    if !(r_bar > 0.0 && r_from >= r_bar && r_to >= r_bar) {
        return Err(SwarmError::Param(format!(
            "radii {r_from} -> {r_to} must both be >= R_bar = {r_bar} > 0"
        )));
    }
    if !(duration >= 0.0) {
        return Err(SwarmError::Param("duration must be >= 0".into()));
    }
    let budget = shrink_budget(pot, params, kind, r_bar, r_from.max(r_to));
    if budget > params.m {
        return Err(SwarmError::BudgetViolation {
            realized: budget,
            budget: params.m,
        });
    }
    let n = state.n();
    let center = centroid(&state.x);
    let phase = (state.x[0] - center).angle();
    let slots = ring_slots(&state.x, center, phase)
        .ok_or_else(|| SwarmError::Param("state is not an equispaced ring".into()))?;
    let expected = ring_positions(&RingSpec::flock(center, r_from, phase, n));
    let off = (0..n).map(|i| (state.x[i] - expected[slots[i]]).norm()).fold(0.0, f64::max);
    if off > 0.1 * r_from {
        return Err(SwarmError::Param(format!(
            "state is {off:.3e} away from a ring of radius {r_from}"
        )));
    }
    let c = params.cruise_speed();
    let motion = match kind {
        RingKindTag::Flock => {
            let w = state.mean_velocity().unit().map(|e| e * c).unwrap_or(Vec2::ZERO);
            RingMotion::Flock { w }
        }
        RingKindTag::Mill => {
            let lz: f64 = state.x.iter().zip(&state.v).map(|(x, v)| (*x - center).cross(*v)).sum();
            RingMotion::Mill {
                speed: c,
                orientation: if lz < 0.0 { -1.0 } else { 1.0 },
            }
        }
    };
    let ring = RingPath::new(center, r_from, r_to, state.t, duration, phase, n, motion);
    let path = move |t: f64, i: usize| -> RefSample { ring.sample(t, slots[i]) };
    let law = pd_tracking(Arc::new(path), opts.k1, opts.k2)?.named("radius_shrink");
    let mut runner = PhaseRunner::with_options(state, pot, params, opts);
    if duration > 0.0 {
        runner.run("shrink", &law, None, duration)?;
    }
    runner.run("settle_ring", &law, None, opts.hold)?;
    let traj = runner.finish();
    let realized = traj.step_max_request.iter().copied().fold(0.0, f64::max);
    if realized > 1.1 * budget {
        return Err(SwarmError::BudgetViolation { realized, budget });
    }
    Ok(traj)
}

/// `1.2` times the radius required about the center [`pick_center`] returns.
pub fn placement_radius(x: &[Vec2], big_l: f64, seed: u64) -> Result<f64> {
    let center = pick_center(x, big_l, seed)?;
    Ok(1.2 * required_radius(x, center, big_l))
}

/// The whole ring construction: `blowup_pipeline`, `circular_placement` on radius `radius`
/// (or [`placement_radius`]), spin-up to a mill at cruise speed on that circle, then
/// `radius_shrink` of the mill to `r_to` over `shrink_duration`. Without a duration the
/// radius moves quasi-statically: its peak rate is `SHRINK_RATE * c`.
#[allow(clippy::too_many_arguments)]
pub fn ring_pipeline(
    init: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    eta: f64,
    big_l: f64,
    radius: Option<f64>,
    r_to: f64,
    shrink_duration: Option<f64>,
    r_bar: f64,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    let mut traj = blowup_pipeline(init, pot, params, eta, big_l, opts)?;
    let spread = traj.final_state().clone();
    let radius = match radius {
        Some(r) => r,
        None => placement_radius(&spread.x, big_l, seed)?,
    };
    let placed = circular_placement(&spread, pot, params, radius, big_l, seed, opts)?;
    let center = placed.center;
    traj.append(placed.trajectory);

    let n = init.n();
    let mut runner = PhaseRunner::with_options(traj.final_state(), pot, params, opts);
    let centers = vec![center; n];
    let radii = vec![radius; n];
    spin(&mut runner, &centers, &radii, &vec![1.0; n], opts)?;
    let c = params.cruise_speed();
    let law = mill_centripetal_clusters(centers, radii)?;
    let tol = 1e-6 * c;
    let cruising = |p: &Probe| p.state.v.iter().all(|v| (v.norm() - c).abs() < tol);
    let desc = format!("speeds within {tol:.1e} of cruise");
    runner.run("mill", &law, Some((&desc, &cruising)), opts.phase_cap)?;
    traj.append(runner.finish());

    let duration = shrink_duration.unwrap_or_else(|| move_duration((radius - r_to).abs(), SHRINK_RATE * c, opts.ramp));
    let shrink = radius_shrink(traj.final_state(), pot, params, RingKindTag::Mill, radius, r_to, duration, r_bar, opts)?;
    traj.append(shrink);
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_avoids_pair_lines() {
        // centroid of a symmetric set sits on a pair line
        let x = [Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 2.0), Vec2::new(0.0, -2.0)];
        let c = pick_center(&x, 1.0, 1).unwrap();
        assert!(c.y.abs() > 1e-6);
        assert!(c.x.abs() > 1e-6);
    }

    #[test]
    fn slots_follow_angles() {
        let ring = ring_positions(&RingSpec::flock(Vec2::ZERO, 2.0, 0.4, 5));
        let x = vec![ring[0], ring[3], ring[1], ring[4], ring[2]];
        assert_eq!(ring_slots(&x, Vec2::ZERO, 0.4).unwrap(), vec![0, 3, 1, 4, 2]);
    }

    #[test]
    fn budget_adds_centripetal_term() {
        let pot = RadialPotential::power_law(4.0, 1.0);
        let params = ModelParams::new(10.0, 3.0, 10.0, 4).unwrap();
        let f = shrink_budget(&pot, &params, RingKindTag::Flock, 1.0, 1.0);
        let m = shrink_budget(&pot, &params, RingKindTag::Mill, 1.0, 1.0);
        // chords in [sqrt 2, 2]: sup |r^3 - 1| = 7
        assert!((f - 7.0).abs() < 1e-6);
        assert!((m - f - 10.0 / 3.0).abs() < 1e-12);
    }
}
