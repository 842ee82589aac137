use std::f64::consts::TAU;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ControlLaw, LawContext};
use crate::error::{Result, SwarmError};
use crate::model::{centroid, interaction_forces, ModelParams, RadialPotential, SwarmState, Vec2};

/// Velocity target of the mill objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum MillVelocityTarget {
    /// `c x^perp / |x|^2`.
    #[default]
    InverseRadius,
    /// `c x^perp / |x|`.
    UnitTangent,
}

/// How the shared mill control is distributed to agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum SharedRotation {
    /// Agent `i` receives `R_{2 pi i/N} u`.
    #[default]
    Index,
    /// Agent `i` receives `R_{theta_i} u`, `theta_i` the polar angle of `x_i - x_m`.
    Polar,
}

/// One-step receding-horizon control problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct InstantaneousSpec {
    /// Prediction horizon.
    pub dt_horizon: f64,
    /// Target radius about `x_m` (mill radius or flock radius).
    pub r_target: f64,
    /// Target common velocity (flock variant).
    pub v_bar: Vec2,
    /// Weights of `|u|` and `|u|^2` (mill variant).
    pub lambda1: f64,
    pub lambda2: f64,
    /// Weight of `|u_i|^2` (flock variant).
    pub lambda: f64,
    /// Mill center; the centroid when absent.
    pub x_m: Option<Vec2>,
    pub velocity_target: MillVelocityTarget,
    pub rotation: SharedRotation,
    /// Controls lie in `[-box_bound, box_bound]^2`.
    pub box_bound: f64,
}

impl Default for InstantaneousSpec {
    fn default() -> Self {
        InstantaneousSpec {
            dt_horizon: 0.05,
            r_target: 1.0,
            v_bar: Vec2::ZERO,
            lambda1: 0.1,
            lambda2: 0.1,
            lambda: 0.1,
            x_m: None,
            velocity_target: MillVelocityTarget::InverseRadius,
            rotation: SharedRotation::Index,
            box_bound: 1.0,
        }
    }
}

impl InstantaneousSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_horizon > 0.0) {
            return Err(SwarmError::Param(format!("dt_horizon must be > 0, got {}", self.dt_horizon)));
        }
        if self.lambda1 < 0.0 || self.lambda2 < 0.0 || self.lambda < 0.0 {
            return Err(SwarmError::Param("penalty weights must be >= 0".into()));
        }
        if !(self.box_bound > 0.0) {
            return Err(SwarmError::Param("box_bound must be > 0".into()));
        }
        Ok(())
    }

    fn clamp(&self, u: Vec2) -> Vec2 {
        let b = self.box_bound;
        Vec2::new(u.x.clamp(-b, b), u.y.clamp(-b, b))
    }
}

/// A minimizer together with the objective there and at `u = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantSolution {
    pub u: Vec2,
    pub objective: f64,
    pub objective_at_zero: f64,
}

/// Uncontrolled part of the explicit-Euler velocity prediction: `v + dt ((alpha - beta|v|^2) v - F)`.
/// Predicted positions are `x + dt v` and do not depend on the control.
fn drift(ctx: &LawContext, dt: f64) -> Vec<Vec2> {
    (0..ctx.n())
        .map(|i| ctx.v[i] + (ctx.propulsion(i) - ctx.forces[i]) * dt)
        .collect()
}

/// Shared-control mill problem: agent `i` receives `R_{2 pi i/N} u`.
struct MillProblem<'a> {
    spec: &'a InstantaneousSpec,
    x: &'a [Vec2],
    a: Vec<Vec2>,
    xp: Vec<Vec2>,
    rot: Vec<(f64, f64)>,
    speed: f64,
}

impl MillProblem<'_> {
    fn objective(&self, u: Vec2) -> f64 {
        let dt = self.spec.dt_horizon;
        let r2t = self.spec.r_target * self.spec.r_target;
        let mut j = 0.0;
        for i in 0..self.x.len() {
            let (s, c) = self.rot[i];
            let ui = Vec2::new(c * u.x - s * u.y, s * u.x + c * u.y);
            let vp = self.a[i] + ui * dt;
            let xp = self.xp[i];
            let r2 = xp.norm_sq();
            let target = match self.spec.velocity_target {
                MillVelocityTarget::InverseRadius => xp.perp() * (self.speed / r2),
                MillVelocityTarget::UnitTangent => xp.perp() * (self.speed / r2.sqrt()),
            };
            let e = r2 - r2t;
            j += (vp - target).norm() + e * e;
        }
        j + self.spec.lambda1 * u.norm() + self.spec.lambda2 * u.norm_sq()
    }
}

const GRID: usize = 41;

/// Minimize the shared-control mill objective over the box: 41x41 grid, then projected-gradient
/// refinement from the best grid point. Ties go to the lexicographically smallest point.
pub fn solve_instantaneous_mill(ctx: &LawContext, spec: &InstantaneousSpec) -> InstantSolution {
    let xm = spec.x_m.unwrap_or_else(|| centroid(ctx.x));
    let prob = MillProblem {
        spec,
        x: ctx.x,
        a: drift(ctx, spec.dt_horizon),
        xp: (0..ctx.n()).map(|i| ctx.x[i] + ctx.v[i] * spec.dt_horizon - xm).collect(),
        rot: shared_angles(ctx.x, xm, spec.rotation).iter().map(|a| a.sin_cos()).collect(),
        speed: ctx.params.cruise_speed(),
    };
    let b = spec.box_bound;
    let j0 = prob.objective(Vec2::ZERO);
    let mut best = (Vec2::ZERO, j0);
    for ix in 0..GRID {
        let ux = -b + 2.0 * b * ix as f64 / (GRID - 1) as f64;
        for iy in 0..GRID {
            let uy = -b + 2.0 * b * iy as f64 / (GRID - 1) as f64;
            let u = Vec2::new(ux, uy);
            let j = prob.objective(u);
            if j < best.1 || (j == best.1 && lex_less(u, best.0)) {
                best = (u, j);
            }
        }
    }
    let (u, j) = refine(&|u| prob.objective(u), spec, best.0, best.1, 100);
    InstantSolution {
        u,
        objective: j,
        objective_at_zero: j0,
    }
}

/// Rotation angle applied to the shared control for each agent.
pub fn shared_angles(x: &[Vec2], xm: Vec2, rotation: SharedRotation) -> Vec<f64> {
    let n = x.len();
    match rotation {
        SharedRotation::Index => (0..n).map(|i| TAU * i as f64 / n as f64).collect(),
        SharedRotation::Polar => x.iter().map(|p| (*p - xm).angle()).collect(),
    }
}

fn lex_less(a: Vec2, b: Vec2) -> bool {
    a.x < b.x || (a.x == b.x && a.y < b.y)
}

/// Projected gradient with central-difference gradients and halving line search.
fn refine(f: &dyn Fn(Vec2) -> f64, spec: &InstantaneousSpec, mut u: Vec2, mut ju: f64, iters: usize) -> (Vec2, f64) {
    let h = 1e-7;
    let mut step = 0.1 * spec.box_bound;
    for _ in 0..iters {
        let g = Vec2::new(
            (f(u + Vec2::new(h, 0.0)) - f(u - Vec2::new(h, 0.0))) / (2.0 * h),
            (f(u + Vec2::new(0.0, h)) - f(u - Vec2::new(0.0, h))) / (2.0 * h),
        );
        if !g.is_finite() || g.norm() < 1e-12 {
            break;
        }
        let mut s = step;
        let mut moved = false;
        while s > 1e-12 {
            let cand = spec.clamp(u - g * s);
            let jc = f(cand);
            if jc < ju {
                moved = (cand - u).norm() > 1e-14;
                u = cand;
                ju = jc;
                step = (s * 2.0).min(spec.box_bound);
                break;
            }
            s *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (u, ju)
}

/// Shared control in `[-1,1]^2` (by default) for the mill objective at `state`.
pub fn instantaneous_mill_control(
    state: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    spec: &InstantaneousSpec,
) -> Result<InstantSolution> {
    spec.validate()?;
    let forces = interaction_forces(pot, &state.x)?;
    let ctx = LawContext {
        t: state.t,
        x: &state.x,
        v: &state.v,
        forces: &forces,
        pot,
        params,
    };
    Ok(solve_instantaneous_mill(&ctx, spec))
}

/// Per-agent flock problem data: `v' = a + dt u`, `x' = b`.
struct FlockAgent {
    a: Vec2,
    b: Vec2,
}

fn flock_objective(ag: &FlockAgent, spec: &InstantaneousSpec, xm: Vec2, u: Vec2) -> (f64, Vec2) {
    let dt = spec.dt_horizon;
    let vp = ag.a + u * dt;
    let xp = ag.b - xm;
    let dv = vp - spec.v_bar;
    let e = xp.norm_sq() - spec.r_target * spec.r_target;
    let j = dv.norm_sq() + e * e + spec.lambda * u.norm_sq();
    let g = dv * (2.0 * dt) + u * (2.0 * spec.lambda);
    (j, g)
}

/// Per-agent controls with objective value, objective at zero and projected-gradient residual.
#[derive(Debug, Clone, PartialEq)]
pub struct FlockSolution {
    pub u: Vec<Vec2>,
    pub objective: Vec<f64>,
    pub objective_at_zero: Vec<f64>,
    pub residual: Vec<f64>,
}

/// Minimize each agent's objective over the box by projected gradient with Armijo backtracking,
/// at most 200 iterations, stopping once the projected-gradient step is below `1e-8`.
pub fn solve_instantaneous_flock(ctx: &LawContext, spec: &InstantaneousSpec) -> FlockSolution {
    let dt = spec.dt_horizon;
    let a = drift(ctx, dt);
    let agents: Vec<FlockAgent> = (0..ctx.n())
        .map(|i| FlockAgent {
            a: a[i],
            b: ctx.x[i] + ctx.v[i] * dt,
        })
        .collect();
    let xm = centroid(&agents.iter().map(|g| g.b).collect::<Vec<_>>());
    let mut sol = FlockSolution {
        u: Vec::with_capacity(ctx.n()),
        objective: Vec::with_capacity(ctx.n()),
        objective_at_zero: Vec::with_capacity(ctx.n()),
        residual: Vec::with_capacity(ctx.n()),
    };
    for ag in &agents {
        let (j0, _) = flock_objective(ag, spec, xm, Vec2::ZERO);
        let mut u = Vec2::ZERO;
        let (mut j, mut g) = (j0, flock_objective(ag, spec, xm, u).1);
        let mut step = 1.0;
        for _ in 0..200 {
            let pg = spec.clamp(u - g) - u;
            if pg.norm() < 1e-8 {
                break;
            }
            let mut s = step;
            let mut accepted = false;
            while s > 1e-14 {
                let cand = spec.clamp(u - g * s);
                let (jc, gc) = flock_objective(ag, spec, xm, cand);
                if jc <= j - 1e-4 * g.dot(u - cand) {
                    u = cand;
                    j = jc;
                    g = gc;
                    accepted = true;
                    step = (s * 2.0).min(1e3);
                    break;
                }
                s *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        sol.residual.push((spec.clamp(u - g) - u).norm());
        sol.u.push(u);
        sol.objective.push(j);
        sol.objective_at_zero.push(j0);
    }
    sol
}

/// Per-agent controls for the flock objective at `state`.
pub fn instantaneous_flock_control(
    state: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
    spec: &InstantaneousSpec,
) -> Result<FlockSolution> {
    spec.validate()?;
    if !(spec.lambda > 0.0) {
        return Err(SwarmError::Param("flock variant needs lambda > 0".into()));
    }
    let forces = interaction_forces(pot, &state.x)?;
    let ctx = LawContext {
        t: state.t,
        x: &state.x,
        v: &state.v,
        forces: &forces,
        pot,
        params,
    };
    Ok(solve_instantaneous_flock(&ctx, spec))
}

/// Closed-loop law re-solving the mill problem at every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantaneousMill {
    pub spec: InstantaneousSpec,
}

impl ControlLaw for InstantaneousMill {
    fn name(&self) -> &str {
        "instantaneous_mill"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        let sol = solve_instantaneous_mill(ctx, &self.spec);
        let xm = self.spec.x_m.unwrap_or_else(|| centroid(ctx.x));
        for (o, th) in out.iter_mut().zip(shared_angles(ctx.x, xm, self.spec.rotation)) {
            *o = sol.u.rotate(th);
        }
        Ok(())
    }
}

/// Closed-loop law re-solving the per-agent flock problem at every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantaneousFlock {
    pub spec: InstantaneousSpec,
}

impl ControlLaw for InstantaneousFlock {
    fn name(&self) -> &str {
        "instantaneous_flock"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        let sol = solve_instantaneous_flock(ctx, &self.spec);
        out.copy_from_slice(&sol.u);
        Ok(())
    }
}
