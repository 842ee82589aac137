use serde::{Deserialize, Serialize};

use super::potential::RadialPotential;

/// A supremum that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Finite(f64),
    Unbounded,
}

impl Bound {
    pub fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Unbounded => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    /// The value, or `+inf` when unbounded.
    pub fn value_or_inf(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// Suprema of the interaction derivative used by the control-bound conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceBounds {
    /// `sup_{r>0} |U'(r)|`.
    pub m_f: Bound,
    /// `sup_{r>0} U'(r)`.
    pub tilde_m_f: Bound,
    /// `sup { |U'(r)| : r > 2 sin(pi/N) Rbar }`.
    pub tilde_m_n: Bound,
}

const SAMPLE_LO: f64 = 1e-6;
const SAMPLE_HI: f64 = 1e6;
const SAMPLES: usize = 100_000;

/// Compute `M_F`, `~M_F` and `~M_N`.
pub fn force_bounds(pot: &RadialPotential, rbar: f64, n: usize) -> ForceBounds {
    let r0 = 2.0 * (std::f64::consts::PI / n as f64).sin() * rbar;
    ForceBounds {
        m_f: sup_abs_deriv(pot, 0.0),
        tilde_m_f: sup_deriv(pot),
        tilde_m_n: sup_abs_deriv(pot, r0),
    }
}

/// `sup { |U'(r)| : r > r_lo }`.
pub fn sup_abs_deriv(pot: &RadialPotential, r_lo: f64) -> Bound {
    match *pot {
        RadialPotential::None => Bound::Finite(0.0),
        RadialPotential::PowerLaw { a, .. } if a > 1.0 => Bound::Unbounded,
        _ if r_lo <= 0.0 && pot.deriv_singular_at_zero() => Bound::Unbounded,
        RadialPotential::Morse { .. } => {
            let cands = morse_candidates(pot, r_lo);
            Bound::Finite(cands.iter().map(|v| v.abs()).fold(0.0, f64::max))
        }
        _ => {
            let f = |r: f64| pot.deriv_unchecked(r).abs();
            let mut s = sampled_sup(&f, r_lo.max(SAMPLE_LO), SAMPLE_HI);
            s = s.max(tail_limit(pot).abs());
            if r_lo <= 0.0 {
                s = s.max(zero_limit(pot).abs());
            } else {
                s = s.max(f(r_lo));
            }
            Bound::Finite(s)
        }
    }
}

/// `sup_{r>0} U'(r)`.
pub fn sup_deriv(pot: &RadialPotential) -> Bound {
    match *pot {
        RadialPotential::None => Bound::Finite(0.0),
        RadialPotential::PowerLaw { a, .. } if a > 1.0 => Bound::Unbounded,
        RadialPotential::QuasiMorse { c, l, p } if p < 1.0 && c * l.powf(-p) < 1.0 => Bound::Unbounded,
        RadialPotential::Morse { .. } => {
            let cands = morse_candidates(pot, 0.0);
            Bound::Finite(cands.iter().copied().fold(f64::MIN, f64::max))
        }
        _ => {
            let f = |r: f64| pot.deriv_unchecked(r);
            let mut s = sampled_sup(&f, SAMPLE_LO, SAMPLE_HI).max(tail_limit(pot));
            if !pot.deriv_singular_at_zero() {
                s = s.max(zero_limit(pot));
            }
            Bound::Finite(s)
        }
    }
}

/// Lipschitz constant of `grad W` on `{|d| >= r_lo}`: `sup max(|U''(r)|, |U'(r)|/r)`.
pub fn grad_lipschitz_bound(pot: &RadialPotential, r_lo: f64) -> Bound {
    match *pot {
        RadialPotential::None => return Bound::Finite(0.0),
        RadialPotential::PowerLaw { a, .. } if a > 2.0 => return Bound::Unbounded,
        _ => {}
    }
    if r_lo <= 0.0 && (pot.second_deriv_singular_at_zero() || zero_limit(pot) != 0.0) {
        return Bound::Unbounded;
    }
    let f = |r: f64| pot.second_deriv_unchecked(r).abs().max((pot.deriv_unchecked(r) / r).abs());
    let lo = r_lo.max(SAMPLE_LO);
    Bound::Finite(sampled_sup(&f, lo, SAMPLE_HI).max(f(lo)))
}

/// `lim_{r -> inf} U'(r)`.
fn tail_limit(pot: &RadialPotential) -> f64 {
    match *pot {
        RadialPotential::PowerLaw { a, b } if a == 1.0 && b < 1.0 => 1.0,
        _ => 0.0,
    }
}

/// `lim_{r -> 0+} U'(r)` for families where it is finite.
fn zero_limit(pot: &RadialPotential) -> f64 {
    pot.deriv(0.0).unwrap_or(0.0)
}

/// Values of `U'` at the Morse stationary point (if it lies beyond `r_lo`), at `r_lo` and at infinity.
fn morse_candidates(pot: &RadialPotential, r_lo: f64) -> Vec<f64> {
    let RadialPotential::Morse {
        c_a,
        ell_a,
        c_r,
        ell_r,
    } = *pot
    else {
        unreachable!("morse_candidates on a non-Morse potential");
    };
    let at = |r: f64| c_a / ell_a * (-r / ell_a).exp() - c_r / ell_r * (-r / ell_r).exp();
    let mut out = vec![0.0, at(r_lo.max(0.0))];
    if ell_a != ell_r {
        let ratio = c_r * ell_a * ell_a / (c_a * ell_r * ell_r);
        let rstar = ratio.ln() / (1.0 / ell_r - 1.0 / ell_a);
        if rstar.is_finite() && rstar > r_lo {
            out.push(at(rstar));
        }
    }
    out
}

/// Supremum of `f` on `[lo, hi]` by log-spaced sampling refined with golden-section search
/// around the best sample.
pub fn sampled_sup(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo > 0.0 && hi > lo);
    let llo = lo.ln();
    let step = (hi.ln() - llo) / (SAMPLES - 1) as f64;
    let r_at = |k: usize| (llo + step * k as f64).exp();
    let mut best_k = 0;
    let mut best = f64::MIN;
    for k in 0..SAMPLES {
        let v = f(r_at(k));
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let a = r_at(best_k.saturating_sub(1));
    let b = r_at((best_k + 1).min(SAMPLES - 1));
    best.max(golden_max(f, a, b, 1e-13))
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
pub fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > tol * (1.0 + a.abs()) && iter < 200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    fc.max(fd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        (0..=n).map(|k| f(lo + (hi - lo) * k as f64 / n as f64)).fold(f64::MIN, f64::max)
    }

    #[test]
    fn power_law_is_unbounded() {
        let u = RadialPotential::power_law(4.0, 1.0);
        let b = force_bounds(&u, 1.0, 4);
        assert_eq!(b.m_f, Bound::Unbounded);
        assert_eq!(b.tilde_m_f, Bound::Unbounded);
        assert_eq!(b.tilde_m_n, Bound::Unbounded);
    }

    #[test]
    fn morse_closed_form_matches_dense_grid() {
        let u = RadialPotential::morse(1.0, 1.0, 2.0, 0.5);
        let b = force_bounds(&u, 1.0, 6);
        let m_f = b.m_f.finite().unwrap();
        let oracle = dense_max(|r| u.deriv_unchecked(r).abs(), 0.0, 40.0, 2_000_000);
        assert!((m_f - oracle).abs() < 1e-6, "{m_f} vs {oracle}");
        let sup = b.tilde_m_f.finite().unwrap();
        let oracle = dense_max(|r| u.deriv_unchecked(r), 0.0, 40.0, 2_000_000);
        assert!((sup - oracle).abs() < 1e-6, "{sup} vs {oracle}");
        let r0 = 2.0 * (std::f64::consts::PI / 6.0).sin();
        let mn = b.tilde_m_n.finite().unwrap();
        let oracle = dense_max(|r| u.deriv_unchecked(r).abs(), r0, 40.0, 2_000_000);
        assert!((mn - oracle).abs() < 1e-6);
    }

    #[test]
    fn quasi_morse_sampled_matches_dense_grid() {
        let u = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
        let b = force_bounds(&u, 0.5, 8);
        let m_f = b.m_f.finite().unwrap();
        let oracle = dense_max(|r| u.deriv_unchecked(r).abs(), 1e-9, 30.0, 3_000_000);
        assert!((m_f - oracle).abs() < 1e-6, "{m_f} vs {oracle}");
        let sup = b.tilde_m_f.finite().unwrap();
        let oracle = dense_max(|r| u.deriv_unchecked(r), 1e-9, 30.0, 3_000_000);
        assert!((sup - oracle).abs() < 1e-6, "{sup} vs {oracle}");
    }

    #[test]
    fn decaying_power_law_is_bounded_away_from_zero() {
        let u = RadialPotential::power_law(0.5, 0.25);
        let b = force_bounds(&u, 1.0, 5);
        assert_eq!(b.m_f, Bound::Unbounded);
        assert!(b.tilde_m_n.is_finite());
        assert!(b.tilde_m_f.is_finite());
    }

    #[test]
    fn lipschitz_bound() {
        assert_eq!(
            grad_lipschitz_bound(&RadialPotential::power_law(2.0, 1.0), 1.0),
            Bound::Finite(1.0)
        );
        let u = RadialPotential::morse(1.0, 1.0, 2.0, 0.5);
        // U'(0) != 0 gives W a cusp at the origin
        assert_eq!(grad_lipschitz_bound(&u, 0.0), Bound::Unbounded);
        let l = grad_lipschitz_bound(&u, 0.5).finite().unwrap();
        let oracle = dense_max(
            |r| u.second_deriv_unchecked(r).abs().max((u.deriv_unchecked(r) / r).abs()),
            0.5,
            40.0,
            2_000_000,
        );
        assert!((l - oracle).abs() < 1e-6, "{l} vs {oracle}");
    }
}
