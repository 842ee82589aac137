use crate::dynamics::{ControlLaw, LawContext};
use crate::error::Result;
use crate::model::{threshold_m_alpha_beta, ModelParams, Vec2};

/// Round-robin sparsification: time is cut into slots of length `slot`; during slot `k` only
/// agent `k mod N` is controlled, with `N` times its inner control, clipped at `bound`.
pub struct Sparsify<L> {
    pub inner: L,
    pub slot: f64,
    pub bound: f64,
}

pub fn sparsify<L: ControlLaw>(inner: L, params: &ModelParams, slot: f64, bound: f64) -> Sparsify<L> {
    let need = params.n as f64 * threshold_m_alpha_beta(params);
    if bound <= need {
        log::warn!("sparse bound {bound} does not exceed N M_(alpha,beta) = {need}");
    }
    Sparsify { inner, slot, bound }
}

impl<L> Sparsify<L> {
    /// Index of the agent active at time `t`.
    pub fn active_agent(&self, t: f64, n: usize) -> usize {
        let k = (t / self.slot + 1e-9).floor();
        (k.rem_euclid(n as f64)) as usize
    }
}

impl<L: ControlLaw> ControlLaw for Sparsify<L> {
    fn name(&self) -> &str {
        "sparsify"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        let n = ctx.n();
        self.inner.eval_into(ctx, out)?;
        let k = self.active_agent(ctx.t, n);
        let mut uk = out[k] * n as f64;
        let m = uk.norm();
        if m > self.bound {
            uk = uk * (self.bound / m);
        }
        out.fill(Vec2::ZERO);
        out[k] = uk;
        Ok(())
    }
}
