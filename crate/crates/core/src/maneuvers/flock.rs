use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::runner::{PhaseRunner, PipelineOptions};
use super::tracking::{PdAccel, TimeShift};
use crate::controllers::{
    cancel_and_inject, flock_hold, jq_feedback, quasi_static_rotation, velocity_kill, InstantaneousFlock,
    InstantaneousSpec, JqParams, QuasiStaticPlan, VelocityRamp,
};
use crate::dynamics::{order_parameters, Probe, StopReason, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::bounds::sampled_sup;
use crate::model::{centroid, min_pair_distance, threshold_m_alpha_beta, ModelParams, RadialPotential, SwarmState, Vec2};

/// Exit tolerance of the settling phase and the Lipschitz constant it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettleTolerance {
    pub eps_prime: f64,
    pub lipschitz: f64,
}

/// `eps' = min(eps / (1 + L/2), M / (2 + alpha + L/2))`, with `L` a sampled Lipschitz bound of
/// `grad W` over the pair distances the swarm can reach: `[d_min/2, 2 diam + 1]`.
pub fn settle_tolerance(pot: &RadialPotential, params: &ModelParams, x: &[Vec2], eps: f64) -> SettleTolerance {
    let (dmin, _, _) = min_pair_distance(x);
    let diam = diameter(x);
    let lo = if dmin.is_finite() { 0.5 * dmin } else { 1e-3 };
    let hi = (2.0 * diam + 1.0).max(2.0 * lo);
    let f = |r: f64| pot.second_deriv_unchecked(r).abs().max((pot.deriv_unchecked(r) / r).abs());
    let lipschitz = if matches!(pot, RadialPotential::None) { 0.0 } else { sampled_sup(&f, lo.max(1e-9), hi) };
    let eps_prime = (eps / (1.0 + 0.5 * lipschitz)).min(params.m / (2.0 + params.alpha + 0.5 * lipschitz));
    SettleTolerance { eps_prime, lipschitz }
}

pub fn diameter(x: &[Vec2]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            d = d.max((x[i] - x[j]).norm());
        }
    }
    d
}

pub(crate) fn require_above_m_ab(params: &ModelParams) -> Result<()> {
    let th = threshold_m_alpha_beta(params);
    if !(params.m > th) {
        return Err(SwarmError::ThresholdViolation { m: params.m, threshold: th });
    }
    Ok(())
}

/// True if `state` already moves as a flock heading along `target` (polarization, speeds and
/// heading all close).
pub fn is_flock_along(state: &SwarmState, params: &ModelParams, target: Vec2) -> bool {
    let c = params.cruise_speed();
    let op = order_parameters(state);
    let heading_ok = state.mean_velocity().angle_to(target).abs() < 0.05;
    op.polarization >= 0.999 && state.v.iter().all(|v| (v.norm() - c).abs() < 1e-2 * c) && heading_ok
}

/// Settle with JQ, brake to rest, then the shared part of both pipelines is done; the runner
/// holds the state at rest.
pub(crate) fn settle_and_stop(runner: &mut PhaseRunner, eps: f64, opts: &PipelineOptions) -> Result<SettleTolerance> {
    let params = *runner.params();
    let tol = settle_tolerance(runner.pot(), &params, &runner.state().x, eps);
    let ep = tol.eps_prime;
    let jq = jq_feedback(&params, JqParams::above_bound(&params, opts.jq_factor))?;
    let settled = |p: &Probe| p.state.max_speed() < ep && p.max_force() < ep;
    let desc = format!("max speed < {ep:.3e} and max force < {ep:.3e}");
    runner.run("settle", &jq, Some((&desc, &settled)), opts.phase_cap)?;

    let eta = 0.5 * ep;
    let kill = velocity_kill(eta, opts.dt)?;
    let stop_v = kill.threshold();
    let stopped = |p: &Probe| p.state.max_speed() <= stop_v;
    let desc = format!("max speed <= {stop_v:.3e}");
    let cap = runner.state().max_speed() / eta + 10.0;
    runner.run("kill", &kill, Some((&desc, &stopped)), cap)?;
    Ok(tol)
}

/// Steer any initial state to a flock moving with `target_vbar`.
///
/// Phases: `settle` (JQ until speeds and forces are below `eps'`), `kill` (brake to rest),
/// `inject` (double-integrator ramp of every velocity to `nu * target_vbar`), `hold`
/// (`u = F`, each speed follows the heteroclinic orbit to cruise). A state that is already such
/// a flock goes straight to `hold`.
pub fn flock_pipeline(
    init: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    target_vbar: Vec2,
    eps: f64,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    opts.validate()?;
    require_above_m_ab(params)?;
    let c = params.cruise_speed();
    if (target_vbar.norm() - c).abs() > 1e-9 * c.max(1.0) {
        return Err(SwarmError::Param(format!("|target_vbar| = {} must equal cruise {c}", target_vbar.norm())));
    }
    let mut runner = PhaseRunner::with_options(init, pot, params, opts);
    if !is_flock_along(init, params, target_vbar) {
        settle_and_stop(&mut runner, eps, opts)?;
        inject_velocity(&mut runner, target_vbar * opts.nu, opts)?;
    }
    runner.run("hold", &flock_hold(), None, opts.hold)?;
    Ok(runner.finish())
}

/// Ramp every velocity from rest to `w` while keeping relative positions.
fn inject_velocity(runner: &mut PhaseRunner, w: Vec2, opts: &PipelineOptions) -> Result<()> {
    let s = runner.state().clone();
    let t0 = s.t;
    let ramp = VelocityRamp {
        x0: s.x.clone(),
        w,
        w0: Vec2::ZERO,
        t0,
        duration: opts.ramp,
    };
    let inner = PdAccel {
        reference: Arc::new(ramp),
        k1: opts.k1,
        k2: opts.k2,
    };
    let law = cancel_and_inject(inner, runner.params().m);
    let t_done = t0 + opts.ramp - 0.5 * opts.dt;
    let tol = 1e-4 * w.norm().max(1e-12);
    let reached = |p: &Probe| p.state.t >= t_done && p.state.v.iter().all(|v| (*v - w).norm() < tol);
    let desc = format!("all velocities within {tol:.1e} of {w:?}");
    runner.run("inject", &law, Some((&desc, &reached)), opts.ramp + 50.0)?;
    Ok(())
}

/// `max_i |(x_i - x_m) - (y_i - y_m)|`.
pub fn relative_drift(x: &[Vec2], y: &[Vec2]) -> f64 {
    let cx = centroid(x);
    let cy = centroid(y);
    x.iter().zip(y).map(|(a, b)| ((*a - cx) - (*b - cy)).norm()).fold(0.0, f64::max)
}

/// Rotate the heading of a flock from `theta0` to `thetaT` over `[t, t + T]` with the
/// quasi-static feedback, then hold. Fails with a tracking-divergence error once relative
/// positions drift more than `envelope`.
pub fn flock_to_flock(
    init_flock: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    plan: QuasiStaticPlan,
    envelope: f64,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    opts.validate()?;
    plan.validate(params)?;
    if !is_flock_along(init_flock, params, plan.v0) {
        return Err(SwarmError::Param(format!(
            "initial state is not a flock heading at theta0 = {}",
            plan.theta0
        )));
    }
    let x0 = init_flock.x.clone();
    let mut runner = PhaseRunner::with_options(init_flock, pot, params, opts);
    let law = TimeShift {
        inner: quasi_static_rotation(params.m, plan),
        t0: init_flock.t,
    };
    let diverged = |p: &Probe| relative_drift(&p.state.x, &x0) > envelope;
    let desc = format!("relative drift > {envelope}");
    if runner.run_watched("rotate", &law, (&desc, &diverged), plan.t_total)? == StopReason::Predicate {
        return Err(SwarmError::TrackingDivergence {
            error: relative_drift(&runner.state().x, &x0),
            envelope,
        });
    }
    runner.run("hold", &flock_hold(), None, opts.hold)?;
    Ok(runner.finish())
}

/// Terminal measures of a heading change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    /// `|angle(mean v) - thetaT|` at the end of the rotation phase.
    pub lag: f64,
    /// Same at the end of the run.
    pub angle_error: f64,
    pub relative_drift: f64,
    /// `max_i ||v_i| - c|` at the end.
    pub speed_dev: f64,
}

pub fn transition_report(traj: &Trajectory, params: &ModelParams, theta_t: f64) -> TransitionReport {
    let angle_err = |s: &SwarmState| {
        let a = s.mean_velocity().angle() - theta_t;
        a.sin().atan2(a.cos()).abs()
    };
    let fin = traj.final_state();
    let rot_end = traj
        .phases
        .iter()
        .find(|p| p.name == "rotate")
        .map(|p| &traj.states[p.last_sample])
        .unwrap_or(fin);
    let c = params.cruise_speed();
    TransitionReport {
        lag: angle_err(rot_end),
        angle_error: angle_err(fin),
        relative_drift: relative_drift(&fin.x, &traj.initial_state().x),
        speed_dev: fin.v.iter().map(|v| (v.norm() - c).abs()).fold(0.0, f64::max),
    }
}

/// Closed-loop instantaneous flock control from a mill until polarization exceeds 0.99 with the
/// mean radius within 5% of `r_f`, then hold.
pub fn mill_to_flock(
    init_mill: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    vbar: Vec2,
    r_f: f64,
    spec: InstantaneousSpec,
    opts: &PipelineOptions,
) -> Result<Trajectory> {
    opts.validate()?;
    let spec = InstantaneousSpec {
        v_bar: vbar,
        r_target: r_f,
        ..spec
    };
    spec.validate()?;
    if !(spec.lambda > 0.0) {
        return Err(SwarmError::Param("flock variant needs lambda > 0".into()));
    }
    let mut runner = PhaseRunner::with_options(init_mill, pot, params, opts);
    let law = InstantaneousFlock { spec };
    let done = |p: &Probe| {
        let op = order_parameters(p.state);
        op.polarization > 0.99 && (op.mean_radius - r_f).abs() < 0.05 * r_f
    };
    runner.run(
        "instantaneous_flock",
        &law,
        Some(("polarization > 0.99 and mean radius within 5%", &done)),
        opts.phase_cap,
    )?;
    runner.run("hold", &flock_hold(), None, opts.hold)?;
    Ok(runner.finish())
}
