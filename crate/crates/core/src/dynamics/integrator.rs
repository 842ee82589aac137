use serde::{Deserialize, Serialize};

use super::law::{saturate_in_place, ControlLaw, LawContext};
use super::order::order_parameters;
use super::trajectory::{StopReason, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::{
    interaction_forces, interaction_forces_into, min_pair_distance, sup_norm, total_energy, ModelParams,
    RadialPotential, SwarmState, Vec2, GUARD_RADIUS,
};

/// Step size, horizon, recording stride, seed and collision guard of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub dt: f64,
    /// Absolute end time.
    pub t_end: f64,
    pub record_every: usize,
    pub seed: u64,
    pub guard: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-2,
            t_end: 10.0,
            record_every: 10,
            seed: 0,
            guard: GUARD_RADIUS,
        }
    }
}

impl SimConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        SimConfig {
            dt,
            t_end,
            ..Default::default()
        }
    }

    pub fn with_record_every(mut self, k: usize) -> Self {
        self.record_every = k;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SwarmError::Param(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end.is_finite()) {
            return Err(SwarmError::Param(format!("t_end must be finite, got {}", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(SwarmError::Param("record_every must be >= 1".into()));
        }
        if !(self.guard >= 0.0) {
            return Err(SwarmError::Param(format!("guard must be >= 0, got {}", self.guard)));
        }
        Ok(())
    }
}

/// Time derivative of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub dx: Vec<Vec2>,
    pub dv: Vec<Vec2>,
}

/// `x' = v`, `v' = (alpha - beta |v|^2) v - F(x) + u`.
pub fn rhs(state: &SwarmState, pot: &RadialPotential, params: &ModelParams, u: &[Vec2]) -> Result<Derivative> {
    if u.len() != state.n() {
        return Err(SwarmError::Param(format!(
            "control has {} entries for {} agents",
            u.len(),
            state.n()
        )));
    }
    let f = interaction_forces(pot, &state.x).map_err(|e| e.at_time(state.t))?;
    let dv = (0..state.n())
        .map(|i| {
            let v = state.v[i];
            v * params.propulsion_factor(v.norm_sq()) - f[i] + u[i]
        })
        .collect();
    Ok(Derivative {
        dx: state.v.clone(),
        dv,
    })
}

/// Scratch buffers for one RK4 integration.
struct Workspace {
    n: usize,
    f: Vec<Vec2>,
    u: Vec<Vec2>,
    kx: [Vec<Vec2>; 4],
    kv: [Vec<Vec2>; 4],
    xs: Vec<Vec2>,
    vs: Vec<Vec2>,
    fs: Vec<Vec2>,
    us: Vec<Vec2>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        let z = || vec![Vec2::ZERO; n];
        Workspace {
            n,
            f: z(),
            u: z(),
            kx: [z(), z(), z(), z()],
            kv: [z(), z(), z(), z()],
            xs: z(),
            vs: z(),
            fs: z(),
            us: z(),
        }
    }
}

struct Stepper<'a> {
    pot: &'a RadialPotential,
    params: &'a ModelParams,
    law: &'a dyn ControlLaw,
}

impl Stepper<'_> {
    /// Evaluate the saturated control and the stage derivative at `(t, x, v)` with forces `f`.
    /// Returns the pre-saturation request.
    #[allow(clippy::too_many_arguments)]
    fn stage(&self, t: f64, x: &[Vec2], v: &[Vec2], f: &[Vec2], u: &mut [Vec2], kx: &mut [Vec2], kv: &mut [Vec2]) -> Result<f64> {
        let ctx = LawContext {
            t,
            x,
            v,
            forces: f,
            pot: self.pot,
            params: self.params,
        };
        self.law.eval_into(&ctx, u)?;
        let request = saturate_in_place(u, self.params.m);
        for i in 0..x.len() {
            let vi = v[i];
            kx[i] = vi;
            kv[i] = vi * self.params.propulsion_factor(vi.norm_sq()) - f[i] + u[i];
        }
        Ok(request)
    }

    /// One RK4 step from `state` whose forces are in `ws.f` and whose stage-1 control is in
    /// `ws.u` with derivative in `ws.kx[0]`, `ws.kv[0]`.
    fn advance(&self, state: &mut SwarmState, dt: f64, ws: &mut Workspace) -> Result<()> {
        let t0 = state.t;
        let n = ws.n;
        for (s, c) in [(1, 0.5), (2, 0.5), (3, 1.0)] {
            let h = c * dt;
            for i in 0..n {
                ws.xs[i] = state.x[i] + ws.kx[s - 1][i] * h;
                ws.vs[i] = state.v[i] + ws.kv[s - 1][i] * h;
            }
            interaction_forces_into(self.pot, &ws.xs, &mut ws.fs).map_err(|e| e.at_time(t0 + h))?;
            let mut kx = std::mem::take(&mut ws.kx[s]);
            let mut kv = std::mem::take(&mut ws.kv[s]);
            self.stage(t0 + h, &ws.xs, &ws.vs, &ws.fs, &mut ws.us, &mut kx, &mut kv)?;
            ws.kx[s] = kx;
            ws.kv[s] = kv;
        }
        let w = dt / 6.0;
        for i in 0..n {
            state.x[i] += (ws.kx[0][i] + ws.kx[1][i] * 2.0 + ws.kx[2][i] * 2.0 + ws.kx[3][i]) * w;
            state.v[i] += (ws.kv[0][i] + ws.kv[1][i] * 2.0 + ws.kv[2][i] * 2.0 + ws.kv[3][i]) * w;
        }
        state.t = t0 + dt;
        if !state.is_finite() {
            return Err(SwarmError::NonFinite { t: state.t });
        }
        Ok(())
    }
}

/// One classical RK4 step; the law is re-evaluated and saturated at every stage.
pub fn step(
    state: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    law: &dyn ControlLaw,
    dt: f64,
) -> Result<SwarmState> {
    if !(dt > 0.0) {
        return Err(SwarmError::Param(format!("dt must be > 0, got {dt}")));
    }
    let stepper = Stepper { pot, params, law };
    let mut ws = Workspace::new(state.n());
    interaction_forces_into(pot, &state.x, &mut ws.f).map_err(|e| e.at_time(state.t))?;
    let (kx0, kv0) = (&mut ws.kx[0], &mut ws.kv[0]);
    stepper.stage(state.t, &state.x, &state.v, &ws.f, &mut ws.u, kx0, kv0)?;
    let mut next = state.clone();
    stepper.advance(&mut next, dt, &mut ws)?;
    Ok(next)
}

/// What a stop predicate sees: the state and the interaction forces at it.
pub struct Probe<'a> {
    pub state: &'a SwarmState,
    pub forces: &'a [Vec2],
}

impl Probe<'_> {
    pub fn max_force(&self) -> f64 {
        sup_norm(self.forces)
    }
}

pub type StopPredicate<'a> = dyn Fn(&Probe) -> bool + 'a;

/// Integrate from `init` up to `cfg.t_end`.
pub fn simulate(
    init: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    law: &dyn ControlLaw,
    cfg: &SimConfig,
) -> Result<Trajectory> {
    simulate_until(init, pot, params, law, cfg, None).map(|(t, _)| t)
}

/// Integrate from `init` until `stop` holds or `cfg.t_end` is reached.
///
/// The predicate is checked at the initial state and after every step; the state at which it
/// first holds is always recorded as the final sample.
pub fn simulate_until(
    init: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    law: &dyn ControlLaw,
    cfg: &SimConfig,
    stop: Option<&StopPredicate>,
) -> Result<(Trajectory, StopReason)> {
    cfg.validate()?;
    init.validate()?;
    if init.n() != params.n {
        return Err(SwarmError::Param(format!(
            "state has {} agents but params.N = {}",
            init.n(),
            params.n
        )));
    }
    let n = init.n();
    let stepper = Stepper { pot, params, law };
    let mut ws = Workspace::new(n);
    let mut traj = Trajectory::default();
    let mut state = init.clone();
    let check_guard = cfg.guard > GUARD_RADIUS;
    let mut k: usize = 0;
    let span = cfg.t_end - init.t;
    let n_steps = if span <= 0.0 {
        0
    } else {
        ((span / cfg.dt) - 1e-9).ceil().max(1.0) as usize
    };
    loop {
        if check_guard {
            let (d, i, j) = min_pair_distance(&state.x);
            if d < cfg.guard {
                return Err(SwarmError::Collision {
                    i,
                    j,
                    distance: d,
                    t: Some(state.t),
                });
            }
        }
        interaction_forces_into(pot, &state.x, &mut ws.f).map_err(|e| e.at_time(state.t))?;
        let (kx0, kv0) = (&mut ws.kx[0], &mut ws.kv[0]);
        let request = stepper.stage(state.t, &state.x, &state.v, &ws.f, &mut ws.u, kx0, kv0)?;
        let stopped = stop.map(|p| p(&Probe { state: &state, forces: &ws.f })).unwrap_or(false);
        let last = stopped || k >= n_steps;
        if k.is_multiple_of(cfg.record_every) || last {
            record(&mut traj, &state, &ws, pot)?;
        }
        if last {
            let reason = if stopped { StopReason::Predicate } else { StopReason::Horizon };
            return Ok((traj, reason));
        }
        traj.step_times.push(state.t);
        traj.step_max_u.push(sup_norm(&ws.u));
        traj.step_max_request.push(request);
        let dt = if k + 1 == n_steps {
            cfg.t_end - state.t
        } else {
            cfg.dt
        };
        stepper.advance(&mut state, dt, &mut ws)?;
        if k + 1 == n_steps {
            // land exactly on the horizon
            state.t = cfg.t_end;
        }
        k += 1;
    }
}

fn record(traj: &mut Trajectory, state: &SwarmState, ws: &Workspace, pot: &RadialPotential) -> Result<()> {
    traj.times.push(state.t);
    traj.energy.push(total_energy(state, pot).map_err(|e| e.at_time(state.t))?);
    traj.order.push(order_parameters(state));
    traj.max_force.push(sup_norm(&ws.f));
    traj.max_speed.push(state.max_speed());
    traj.controls.push(ws.u.clone());
    traj.states.push(state.clone());
    Ok(())
}
