use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};
use crate::model::{interaction_forces, potential_energy, sup_norm, RadialPotential, Vec2};

/// Outcome of [`relax_positions`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relaxed {
    pub x: Vec<Vec2>,
    pub max_force: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Steepest descent on the potential energy, whose gradient in `x_i` is `F_i`, with adaptive
/// steps: grow by 1.2 on acceptance, halve on an energy increase. Below energy round-off a step
/// is accepted when it lowers the largest force. Stops once `max |F_i| < tol`.
pub fn relax_positions(pot: &RadialPotential, x0: &[Vec2], tol: f64, max_iter: usize) -> Result<Relaxed> {
    let mut x = x0.to_vec();
    let mut e = potential_energy(pot, &x)?;
    let mut f = interaction_forces(pot, &x)?;
    let mut h = 1e-2;
    let mut trial = vec![Vec2::ZERO; x.len()];
    for it in 0..max_iter {
        let fm = sup_norm(&f);
        if fm < tol {
            return Ok(Relaxed { x, max_force: fm, iterations: it, converged: true });
        }
        loop {
            for ((t, xi), fi) in trial.iter_mut().zip(&x).zip(&f) {
                *t = *xi - *fi * h;
            }
            let et = potential_energy(pot, &trial).ok();
            let accept = match et {
                Some(et) if et < e => true,
                Some(et) if (et - e).abs() <= 1e-13 * e.abs().max(1.0) => {
                    interaction_forces(pot, &trial).map(|ft| sup_norm(&ft) < fm).unwrap_or(false)
                }
                _ => false,
            };
            match et {
                Some(et) if accept => {
                    std::mem::swap(&mut x, &mut trial);
                    e = et;
                    h *= 1.2;
                    break;
                }
                _ => {
                    h *= 0.5;
                    if h < 1e-14 {
                        return Err(SwarmError::Degenerate(format!(
                            "relaxation stalled at max force {fm}"
                        )));
                    }
                }
            }
        }
        f = interaction_forces(pot, &x)?;
    }
    let fm = sup_norm(&f);
    Ok(Relaxed { x, max_force: fm, iterations: max_iter, converged: fm < tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_relaxes_to_unit_distance() {
        let pot = RadialPotential::power_law(4.0, 1.0);
        let r = relax_positions(&pot, &[Vec2::ZERO, Vec2::new(0.3, 0.1)], 1e-12, 10_000).unwrap();
        assert!(r.converged);
        assert!(((r.x[0] - r.x[1]).norm() - 1.0).abs() < 1e-10);
    }
}
