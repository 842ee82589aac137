use std::sync::Arc;

use super::reference::smoothstep5;
use crate::dynamics::{ControlLaw, LawContext};
use crate::error::{Result, SwarmError};
use crate::model::{bounds, RadialPotential, Vec2, GUARD_RADIUS};

/// Surrogate radial derivative `r -> U~'(r)`.
pub trait SurrogateDeriv: Send + Sync {
    fn deriv(&self, r: f64) -> f64;
}

impl<F> SurrogateDeriv for F
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn deriv(&self, r: f64) -> f64 {
        self(r)
    }
}

/// `U~'(r) = phi(r) (U'(r) - ~M_F) - eta / (1 + r^2)`, with `phi` a quintic step from 1 on
/// `[0, R0]` down to 0 on `[R0 + 1, inf)`. Strictly negative, hence purely repulsive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepulsiveSurrogate {
    pub pot: RadialPotential,
    pub eta: f64,
    pub r0: f64,
    /// `~M_F = sup U'`.
    pub sup_deriv: f64,
}

impl RepulsiveSurrogate {
    /// Cutoff factor `phi(r)`.
    pub fn cutoff(&self, r: f64) -> f64 {
        1.0 - smoothstep5(r - self.r0).0
    }

    /// Upper bound on `|U~' - U'|`: `~M_F + 2 eta`.
    pub fn deviation_bound(&self) -> f64 {
        self.sup_deriv + 2.0 * self.eta
    }
}

impl SurrogateDeriv for RepulsiveSurrogate {
    fn deriv(&self, r: f64) -> f64 {
        let phi = self.cutoff(r);
        let core = if phi > 0.0 {
            phi * (self.pot.deriv_unchecked(r) - self.sup_deriv)
        } else {
            0.0
        };
        core - self.eta / (1.0 + r * r)
    }
}

/// Build the repulsive surrogate. `R0` must be chosen so that `|U'(r)| < eta` for `r >= R0`.
pub fn build_repulsive_surrogate(pot: &RadialPotential, eta: f64, r0: f64) -> Result<RepulsiveSurrogate> {
    if !(eta > 0.0 && r0 > 0.0) {
        return Err(SwarmError::Param(format!("surrogate needs eta, R0 > 0, got {eta}, {r0}")));
    }
    let sup_deriv = bounds::sup_deriv(pot).finite().ok_or_else(|| {
        SwarmError::Param(format!("sup U' is unbounded for the {} potential", pot.family_name()))
    })?;
    let tail = bounds::sup_abs_deriv(pot, r0).value_or_inf();
    if !(tail < eta) {
        return Err(SwarmError::Param(format!(
            "|U'| reaches {tail} >= eta = {eta} beyond R0 = {r0}; increase R0"
        )));
    }
    Ok(RepulsiveSurrogate {
        pot: *pot,
        eta,
        r0,
        sup_deriv,
    })
}

/// Smallest `R0` on a doubling grid from `start` for which `|U'| < eta` beyond it.
pub fn surrogate_cutoff_radius(pot: &RadialPotential, eta: f64, start: f64) -> Result<f64> {
    let mut r0 = start.max(1e-3);
    for _ in 0..80 {
        if bounds::sup_abs_deriv(pot, r0).value_or_inf() < eta {
            return Ok(r0);
        }
        r0 *= 2.0;
    }
    Err(SwarmError::Param(format!("|U'| never drops below eta = {eta}")))
}

/// Interaction forces of a surrogate kernel: `(1/N) sum_j U~'(r_ij) d_ij / r_ij`.
pub fn surrogate_forces_into(sur: &dyn SurrogateDeriv, x: &[Vec2], out: &mut [Vec2]) -> Result<()> {
    let n = x.len();
    out.fill(Vec2::ZERO);
    for i in 0..n {
        for j in i + 1..n {
            let d = x[i] - x[j];
            let r = d.norm();
            if !(r >= GUARD_RADIUS) {
                return Err(SwarmError::Collision {
                    i,
                    j,
                    distance: r,
                    t: None,
                });
            }
            let g = d * (sur.deriv(r) / r);
            out[i] += g;
            out[j] -= g;
        }
    }
    let inv = 1.0 / n as f64;
    for f in out.iter_mut() {
        *f = *f * inv;
    }
    Ok(())
}

/// `u = F - F~ + w`: the closed loop evolves as if the potential were the surrogate, driven by `w`.
pub struct FictitiousControl<L> {
    pub surrogate: Arc<dyn SurrogateDeriv>,
    pub inner: L,
}

pub fn fictitious_potential_control<L: ControlLaw>(
    surrogate: Arc<dyn SurrogateDeriv>,
    inner: L,
) -> FictitiousControl<L> {
    FictitiousControl { surrogate, inner }
}

impl<L> FictitiousControl<L> {
    /// `max_i |F_i - F~_i|` at positions `x`.
    pub fn force_gap(&self, pot: &RadialPotential, x: &[Vec2]) -> Result<f64> {
        let f = crate::model::interaction_forces(pot, x)?;
        let mut g = vec![Vec2::ZERO; x.len()];
        surrogate_forces_into(self.surrogate.as_ref(), x, &mut g)?;
        Ok(f.iter().zip(&g).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max))
    }
}

impl<L: ControlLaw> ControlLaw for FictitiousControl<L> {
    fn name(&self) -> &str {
        "fictitious_potential"
    }

    fn eval_into(&self, ctx: &LawContext, out: &mut [Vec2]) -> Result<()> {
        self.inner.eval_into(ctx, out)?;
        let mut g = vec![Vec2::ZERO; ctx.n()];
        surrogate_forces_into(self.surrogate.as_ref(), ctx.x, &mut g).map_err(|e| e.at_time(ctx.t))?;
        for i in 0..ctx.n() {
            out[i] += ctx.forces[i] - g[i];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surrogate_is_repulsive_and_close() {
        let u = RadialPotential::power_law(0.5, 0.25);
        let eta = 0.05;
        let r0 = surrogate_cutoff_radius(&u, eta, 1.0).unwrap();
        let s = build_repulsive_surrogate(&u, eta, r0).unwrap();
        for k in 1..=100_000 {
            let r = 1e3 * k as f64 / 100_000.0;
            let d = s.deriv(r);
            assert!(d < 0.0, "U~'({r}) = {d}");
            assert!((d - u.deriv_unchecked(r)).abs() <= s.deviation_bound() + 1e-12);
        }
        let far = r0 + 1.5;
        assert_eq!(s.deriv(far), -eta / (1.0 + far * far));
    }

    #[test]
    fn rejects_small_cutoff() {
        let u = RadialPotential::power_law(0.5, 0.25);
        assert!(build_repulsive_surrogate(&u, 0.05, 0.5).is_err());
        assert!(build_repulsive_surrogate(&RadialPotential::power_law(4.0, 1.0), 0.05, 5.0).is_err());
    }
}
