use crate::error::Result;
use crate::model::{interaction_forces, ModelParams, RadialPotential, SwarmState, Vec2};

/// Everything a feedback law may read at one evaluation.
///
/// `forces` holds `F_i(x)` for the true potential; the integrator computes it once per stage
/// and shares it with the law.
#[derive(Debug, Clone, Copy)]
pub struct LawContext<'a> {
    pub t: f64,
    pub x: &'a [Vec2],
    pub v: &'a [Vec2],
    pub forces: &'a [Vec2],
    pub pot: &'a RadialPotential,
    pub params: &'a ModelParams,
}

impl LawContext<'_> {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `(alpha - beta |v_i|^2) v_i`.
    #[inline]
    pub fn propulsion(&self, i: usize) -> Vec2 {
        let v = self.v[i];
        v * self.params.propulsion_factor(v.norm_sq())
    }

    pub fn state(&self) -> SwarmState {
        SwarmState {
            t: self.t,
            x: self.x.to_vec(),
            v: self.v.to_vec(),
        }
    }
}

/// A named feedback `u = k(t, x, v)`.
///
/// Evaluation must be a pure function of the context so that the integrator can call it at
/// every Runge-Kutta stage. The integrator saturates the output at `M`.
pub trait ControlLaw: Send + Sync {
    fn name(&self) -> &str;

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()>;

    fn eval(&self, ctx: &LawContext) -> Result<Vec<Vec2>> {
        let mut out = vec![Vec2::ZERO; ctx.n()];
        self.eval_into(ctx, &mut out)?;
        Ok(out)
    }
}

impl<L: ControlLaw + ?Sized> ControlLaw for Box<L> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        (**self).eval_into(ctx, out)
    }
}

impl<L: ControlLaw + ?Sized> ControlLaw for std::sync::Arc<L> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        (**self).eval_into(ctx, out)
    }
}

impl<L: ControlLaw + ?Sized> ControlLaw for &L {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        (**self).eval_into(ctx, out)
    }
}

/// `u = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroControl;

impl ControlLaw for ZeroControl {
    fn name(&self) -> &str {
        "zero"
    }
    fn eval_into(&self, _ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        out.fill(Vec2::ZERO);
        Ok(())
    }
}

/// A law built from a closure.
pub struct FnLaw<F> {
    name: String,
    f: F,
}

impl<F> FnLaw<F>
where
    F: Fn(&LawContext, &mut [Vec2]) -> Result<()> + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnLaw { name: name.into(), f }
    }
}

impl<F> ControlLaw for FnLaw<F>
where
    F: Fn(&LawContext, &mut [Vec2]) -> Result<()> + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }
    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        (self.f)(ctx, out)
    }
}

/// Evaluate a law at a state, computing the interaction forces first. No saturation.
pub fn eval_at_state(
    law: &dyn ControlLaw,
    state: &SwarmState,
    pot: &RadialPotential,
    params: &ModelParams,
) -> Result<Vec<Vec2>> {
    let forces = interaction_forces(pot, &state.x).map_err(|e| e.at_time(state.t))?;
    law.eval(&LawContext {
        t: state.t,
        x: &state.x,
        v: &state.v,
        forces: &forces,
        pot,
        params,
    })
}

/// Radially rescale every `u_i` with `|u_i| > M` to norm `M`.
pub fn saturate(u: &[Vec2], m: f64) -> Vec<Vec2> {
    let mut out = u.to_vec();
    saturate_in_place(&mut out, m);
    out
}

/// In-place [`saturate`]; returns the largest norm before clipping.
pub fn saturate_in_place(u: &mut [Vec2], m: f64) -> f64 {
    let mut request = 0.0f64;
    for ui in u.iter_mut() {
        let n = ui.norm();
        request = request.max(n);
        if n > m {
            *ui = *ui * (m / n);
        }
    }
    request
}
