use super::params::ModelParams;
use super::potential::RadialPotential;
use super::state::SwarmState;
use super::vec2::Vec2;
use crate::error::{Result, SwarmError};

/// Pairs closer than this raise a collision error instead of producing huge or undefined forces.
pub const GUARD_RADIUS: f64 = 1e-9;

/// Symmetric 2x2 matrix stored row-major.
pub type Mat2 = [[f64; 2]; 2];

/// `grad W(d) = U'(|d|) d/|d|`.
pub fn pair_gradient(pot: &RadialPotential, d: Vec2) -> Result<Vec2> {
    let r = d.norm();
    if !(r >= GUARD_RADIUS) {
        return Err(SwarmError::Collision {
            i: 0,
            j: 1,
            distance: r,
            t: None,
        });
    }
    Ok(d * (pot.deriv_unchecked(r) / r))
}

/// `F_i = (1/N) sum_{j != i} grad W(x_i - x_j)`.
pub fn interaction_forces(pot: &RadialPotential, x: &[Vec2]) -> Result<Vec<Vec2>> {
    let mut out = vec![Vec2::ZERO; x.len()];
    interaction_forces_into(pot, x, &mut out)?;
    Ok(out)
}

/// Allocation-free variant of [`interaction_forces`].
///
/// Pairs are visited in lexicographic `(i, j)` order with `i < j`, and each pair term is added
/// to `F_i` and subtracted from `F_j`, so the result does not depend on anything but the input.
pub fn interaction_forces_into(pot: &RadialPotential, x: &[Vec2], out: &mut [Vec2]) -> Result<()> {
    let n = x.len();
    debug_assert_eq!(out.len(), n);
    for f in out.iter_mut() {
        *f = Vec2::ZERO;
    }
    if n == 0 {
        return Ok(());
    }
    let guard_sq = GUARD_RADIUS * GUARD_RADIUS;
    for i in 0..n {
        let xi = x[i];
        let mut fi = Vec2::ZERO;
        for j in i + 1..n {
            let d = xi - x[j];
            let r2 = d.norm_sq();
            if !(r2 >= guard_sq) {
                return Err(SwarmError::Collision {
                    i,
                    j,
                    distance: r2.sqrt(),
                    t: None,
                });
            }
            if let RadialPotential::None = pot {
                continue;
            }
            let r = r2.sqrt();
            let g = d * (pot.deriv_unchecked(r) / r);
            fi += g;
            out[j] -= g;
        }
        out[i] += fi;
    }
    let inv_n = 1.0 / n as f64;
    for f in out.iter_mut() {
        *f = *f * inv_n;
    }
    Ok(())
}

/// `Hess W(d) = U''(r) d^ d^T + (U'(r)/r) (I - d^ d^T)`.
pub fn hessian_w(pot: &RadialPotential, d: Vec2) -> Result<Mat2> {
    let r = d.norm();
    if !(r > 0.0) {
        return Err(SwarmError::Singularity { r });
    }
    let e = d / r;
    let a = pot.second_deriv_unchecked(r);
    let b = pot.deriv_unchecked(r) / r;
    let exy = e.x * e.y;
    let off = (a - b) * exy;
    Ok([
        [a * e.x * e.x + b * (1.0 - e.x * e.x), off],
        [off, a * e.y * e.y + b * (1.0 - e.y * e.y)],
    ])
}

/// `(1/2N) sum_{i != j} W(x_i - x_j)`.
pub fn potential_energy(pot: &RadialPotential, x: &[Vec2]) -> Result<f64> {
    let n = x.len();
    if n == 0 {
        return Ok(0.0);
    }
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let r = (x[i] - x[j]).norm();
            if !(r >= GUARD_RADIUS) {
                return Err(SwarmError::Collision {
                    i,
                    j,
                    distance: r,
                    t: None,
                });
            }
            s += pot.value_unchecked(r);
        }
    }
    Ok(s / n as f64)
}

pub fn kinetic_energy(v: &[Vec2]) -> f64 {
    0.5 * v.iter().map(|w| w.norm_sq()).sum::<f64>()
}

/// `V = (1/2) sum |v_i|^2 + (1/2N) sum_{i != j} W(x_i - x_j)`.
pub fn total_energy(state: &SwarmState, pot: &RadialPotential) -> Result<f64> {
    Ok(kinetic_energy(&state.v) + potential_energy(pot, &state.x)?)
}

/// `dV/dt = sum_i [(alpha - beta |v_i|^2) |v_i|^2 + v_i . u_i]` along the controlled flow.
pub fn energy_rate(v: &[Vec2], u: &[Vec2], params: &ModelParams) -> f64 {
    v.iter()
        .zip(u)
        .map(|(vi, ui)| {
            let s2 = vi.norm_sq();
            params.propulsion_factor(s2) * s2 + vi.dot(*ui)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(pot: &RadialPotential, p: Vec2) -> f64 {
        pot.value_unchecked(p.norm())
    }

    #[test]
    fn gradient_at_equilibrium_and_at_two() {
        let u = RadialPotential::power_law(4.0, 1.0);
        assert_eq!(pair_gradient(&u, Vec2::new(1.0, 0.0)).unwrap(), Vec2::ZERO);
        assert_eq!(pair_gradient(&u, Vec2::new(2.0, 0.0)).unwrap(), Vec2::new(7.0, 0.0));
        assert!(matches!(
            pair_gradient(&u, Vec2::new(1e-12, 0.0)),
            Err(SwarmError::Collision { .. })
        ));
    }

    #[test]
    fn forces_vanish_at_pair_equilibrium() {
        let u = RadialPotential::power_law(4.0, 1.0);
        let f = interaction_forces(&u, &[Vec2::ZERO, Vec2::new(1.0, 0.0)]).unwrap();
        assert_eq!(f, vec![Vec2::ZERO, Vec2::ZERO]);
    }

    #[test]
    fn forces_match_energy_gradient() {
        let u = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
        let x = vec![Vec2::new(0.1, 0.2), Vec2::new(1.3, -0.4), Vec2::new(-0.7, 0.9)];
        let f = interaction_forces(&u, &x).unwrap();
        let n = x.len() as f64;
        let h = 1e-6;
        for i in 0..x.len() {
            let e = |p: Vec2| -> f64 {
                (0..x.len()).filter(|&j| j != i).map(|j| w(&u, p - x[j])).sum::<f64>() / n
            };
            let gx = (e(x[i] + Vec2::new(h, 0.0)) - e(x[i] - Vec2::new(h, 0.0))) / (2.0 * h);
            let gy = (e(x[i] + Vec2::new(0.0, h)) - e(x[i] - Vec2::new(0.0, h))) / (2.0 * h);
            assert!((f[i] - Vec2::new(gx, gy)).norm() < 1e-8);
        }
        let total = f.iter().fold(Vec2::ZERO, |a, b| a + *b);
        assert!(total.norm() < 1e-12);
    }

    #[test]
    fn collision_names_the_pair() {
        let u = RadialPotential::power_law(4.0, 1.0);
        let x = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0)];
        match interaction_forces(&u, &x) {
            Err(SwarmError::Collision { i, j, .. }) => assert_eq!((i, j), (1, 2)),
            other => panic!("expected collision, got {other:?}"),
        }
    }

    #[test]
    fn hessian_of_quadratic_power_law() {
        let u = RadialPotential::power_law(2.0, 1.0);
        let r = 2.5;
        let h = hessian_w(&u, Vec2::new(r, 0.0)).unwrap();
        assert!((h[0][0] - 1.0).abs() < 1e-15);
        assert!((h[1][1] - (1.0 - 1.0 / r)).abs() < 1e-15);
        assert_eq!(h[0][1], 0.0);
    }

    #[test]
    fn energy_of_pair_at_equilibrium() {
        let u = RadialPotential::power_law(4.0, 1.0);
        let s = SwarmState::at_rest(0.0, vec![Vec2::ZERO, Vec2::new(1.0, 0.0)]);
        assert!((total_energy(&s, &u).unwrap() + 0.375).abs() < 1e-15);
        let s = SwarmState::new(0.0, vec![Vec2::ZERO; 0], vec![]).unwrap();
        assert_eq!(total_energy(&s, &u).unwrap(), 0.0);
    }

    #[test]
    fn kinetic_only_without_potential() {
        let s = SwarmState::new(
            0.0,
            vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(0.0, 4.0)],
            vec![Vec2::new(0.6, 0.8), Vec2::new(-1.0, 0.0), Vec2::new(0.0, 1.0)],
        )
        .unwrap();
        assert!((total_energy(&s, &RadialPotential::None).unwrap() - 1.5).abs() < 1e-15);
    }
}
