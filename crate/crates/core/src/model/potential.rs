use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};

/// Radial interaction kernel `U(r)`; the pair potential is `W(x) = U(|x|)`.
///
/// Serialized with a `family` tag, e.g. `{"family": "power_law", "a": 4.0, "b": 1.0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialPotential {
    /// `-C_A exp(-r/ell_A) + C_R exp(-r/ell_R)`.
    Morse {
        #[serde(rename = "C_A")]
        c_a: f64,
        #[serde(rename = "ell_A")]
        ell_a: f64,
        #[serde(rename = "C_R")]
        c_r: f64,
        #[serde(rename = "ell_R")]
        ell_r: f64,
    },
    /// `V(r) - C V(r/l)` with `V(r) = -exp(-r^p/p)`.
    QuasiMorse {
        #[serde(rename = "C")]
        c: f64,
        l: f64,
        p: f64,
    },
    /// `r^a/a - r^b/b`.
    PowerLaw { a: f64, b: f64 },
    /// `U = 0`: no interaction.
    None,
}

impl RadialPotential {
    pub fn morse(c_a: f64, ell_a: f64, c_r: f64, ell_r: f64) -> Self {
        RadialPotential::Morse {
            c_a,
            ell_a,
            c_r,
            ell_r,
        }
    }

    pub fn quasi_morse(c: f64, l: f64, p: f64) -> Self {
        RadialPotential::QuasiMorse { c, l, p }
    }

    pub fn power_law(a: f64, b: f64) -> Self {
        RadialPotential::PowerLaw { a, b }
    }

    /// Check the family invariants.
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(SwarmError::Param(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match *self {
            RadialPotential::Morse {
                c_a,
                ell_a,
                c_r,
                ell_r,
            } => {
                pos("C_A", c_a)?;
                pos("ell_A", ell_a)?;
                pos("C_R", c_r)?;
                pos("ell_R", ell_r)
            }
            RadialPotential::QuasiMorse { c, l, p } => {
                pos("C", c)?;
                pos("l", l)?;
                pos("p", p)
            }
            RadialPotential::PowerLaw { a, b } => {
                pos("b", b)?;
                if a.is_finite() && a > b {
                    Ok(())
                } else {
                    Err(SwarmError::Param(format!("power law needs a > b > 0, got a = {a}, b = {b}")))
                }
            }
            RadialPotential::None => Ok(()),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            RadialPotential::Morse { .. } => "morse",
            RadialPotential::QuasiMorse { .. } => "quasi_morse",
            RadialPotential::PowerLaw { .. } => "power_law",
            RadialPotential::None => "none",
        }
    }

    /// True when `U'` diverges as `r -> 0+`.
    pub fn deriv_singular_at_zero(&self) -> bool {
        match *self {
            RadialPotential::PowerLaw { b, .. } => b < 1.0,
            RadialPotential::QuasiMorse { p, .. } => p < 1.0,
            _ => false,
        }
    }

    /// True when `U''` diverges as `r -> 0+`.
    pub fn second_deriv_singular_at_zero(&self) -> bool {
        match *self {
            RadialPotential::PowerLaw { b, .. } => b < 2.0,
            RadialPotential::QuasiMorse { p, .. } => p < 2.0 && p != 1.0,
            _ => false,
        }
    }

    /// `U(r)`.
    pub fn value(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        if r == 0.0 {
            if let RadialPotential::PowerLaw { .. } = self {
                // both powers vanish for a, b > 0
                return Ok(0.0);
            }
        }
        Ok(self.value_unchecked(r))
    }

    /// `U'(r)`.
    pub fn deriv(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        if r == 0.0 {
            if self.deriv_singular_at_zero() {
                return Err(SwarmError::Singularity { r });
            }
            return Ok(self.deriv_at_zero());
        }
        Ok(self.deriv_unchecked(r))
    }

    /// `U''(r)`.
    pub fn second_deriv(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        if r == 0.0 {
            if self.second_deriv_singular_at_zero() {
                return Err(SwarmError::Singularity { r });
            }
            return Ok(self.second_deriv_unchecked(f64::MIN_POSITIVE));
        }
        Ok(self.second_deriv_unchecked(r))
    }

    fn deriv_at_zero(&self) -> f64 {
        match *self {
            RadialPotential::Morse {
                c_a,
                ell_a,
                c_r,
                ell_r,
            } => c_a / ell_a - c_r / ell_r,
            RadialPotential::QuasiMorse { c, l, p } => {
                if p == 1.0 {
                    1.0 - c / l
                } else {
                    0.0
                }
            }
            RadialPotential::PowerLaw { a, b } => {
                let t = |e: f64| if e == 1.0 { 1.0 } else { 0.0 };
                t(a) - t(b)
            }
            RadialPotential::None => 0.0,
        }
    }

    /// `U(r)` for `r > 0` without argument checks.
    #[inline]
    pub fn value_unchecked(&self, r: f64) -> f64 {
        match *self {
            RadialPotential::Morse {
                c_a,
                ell_a,
                c_r,
                ell_r,
            } => -c_a * (-r / ell_a).exp() + c_r * (-r / ell_r).exp(),
            RadialPotential::QuasiMorse { c, l, p } => qm_v(r, p) - c * qm_v(r / l, p),
            RadialPotential::PowerLaw { a, b } => r.powf(a) / a - r.powf(b) / b,
            RadialPotential::None => 0.0,
        }
    }

    /// `U'(r)` for `r > 0` without argument checks.
    #[inline]
    pub fn deriv_unchecked(&self, r: f64) -> f64 {
        match *self {
            RadialPotential::Morse {
                c_a,
                ell_a,
                c_r,
                ell_r,
            } => c_a / ell_a * (-r / ell_a).exp() - c_r / ell_r * (-r / ell_r).exp(),
            RadialPotential::QuasiMorse { c, l, p } => qm_dv(r, p) - c / l * qm_dv(r / l, p),
            RadialPotential::PowerLaw { a, b } => pow_fast(r, a - 1.0) - pow_fast(r, b - 1.0),
            RadialPotential::None => 0.0,
        }
    }

    /// `U''(r)` for `r > 0` without argument checks.
    #[inline]
    pub fn second_deriv_unchecked(&self, r: f64) -> f64 {
        match *self {
            RadialPotential::Morse {
                c_a,
                ell_a,
                c_r,
                ell_r,
            } => -c_a / (ell_a * ell_a) * (-r / ell_a).exp() + c_r / (ell_r * ell_r) * (-r / ell_r).exp(),
            RadialPotential::QuasiMorse { c, l, p } => qm_ddv(r, p) - c / (l * l) * qm_ddv(r / l, p),
            RadialPotential::PowerLaw { a, b } => {
                (a - 1.0) * pow_fast(r, a - 2.0) - (b - 1.0) * pow_fast(r, b - 2.0)
            }
            RadialPotential::None => 0.0,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        Err(SwarmError::Domain(format!("radius must be nonnegative, got {r}")))
    } else {
        Ok(())
    }
}

/// `r^e` with cheap special cases for the exponents that appear in practice.
#[inline]
fn pow_fast(r: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        r
    } else if e == 2.0 {
        r * r
    } else if e == 3.0 {
        r * r * r
    } else if e == 0.5 {
        r.sqrt()
    } else if e == -1.0 {
        1.0 / r
    } else if e == -0.5 {
        1.0 / r.sqrt()
    } else {
        r.powf(e)
    }
}

#[inline]
fn qm_v(r: f64, p: f64) -> f64 {
    let rp = r * pow_fast(r, p - 1.0);
    -(-rp / p).exp()
}

#[inline]
fn qm_dv(r: f64, p: f64) -> f64 {
    let rpm1 = pow_fast(r, p - 1.0);
    rpm1 * (-r * rpm1 / p).exp()
}

#[inline]
fn qm_ddv(r: f64, p: f64) -> f64 {
    let rpm1 = pow_fast(r, p - 1.0);
    let lead = if p == 1.0 { 0.0 } else { (p - 1.0) * pow_fast(r, p - 2.0) };
    (lead - rpm1 * rpm1) * (-r * rpm1 / p).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd1(f: impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
        (f(r + h) - f(r - h)) / (2.0 * h)
    }

    #[test]
    fn power_law_at_unit_radius() {
        let u = RadialPotential::power_law(4.0, 1.0);
        assert_eq!(u.value(1.0).unwrap(), -0.75);
        assert_eq!(u.deriv(1.0).unwrap(), 0.0);
        assert_eq!(u.deriv(2.0).unwrap(), 7.0);
        assert_eq!(u.second_deriv(1.0).unwrap(), 3.0);
        let quad = RadialPotential::power_law(2.0, 1.0);
        for r in [0.1, 1.0, 7.3] {
            assert_eq!(quad.second_deriv(r).unwrap(), 1.0);
        }
    }

    #[test]
    fn quasi_morse_at_zero() {
        let u = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
        assert!((u.value(0.0).unwrap() - (-1.0 + 0.6)).abs() < 1e-15);
    }

    #[test]
    fn morse_value_matches_closed_form() {
        let u = RadialPotential::morse(1.0, 1.0, 2.0, 0.5);
        // -e^-1 + 2 e^-2 to 20 digits
        let oracle = -0.367_879_441_171_442_33 + 2.0 * 0.135_335_283_236_612_7;
        assert!((u.value(1.0).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let pots = [
            RadialPotential::power_law(4.0, 1.0),
            RadialPotential::power_law(2.5, 1.5),
            RadialPotential::quasi_morse(0.6, 0.5, 1.5),
            RadialPotential::quasi_morse(0.8, 0.3, 2.7),
            RadialPotential::morse(1.0, 1.0, 2.0, 0.5),
        ];
        for u in pots {
            for r in [0.3, 0.9, 1.0, 2.0, 3.7] {
                let d1 = fd1(|s| u.value_unchecked(s), r, 1e-6);
                assert!((d1 - u.deriv(r).unwrap()).abs() < 1e-6, "{u:?} U' at {r}");
                let d2 = fd1(|s| u.deriv_unchecked(s), r, 1e-6);
                assert!((d2 - u.second_deriv(r).unwrap()).abs() < 1e-5, "{u:?} U'' at {r}");
            }
        }
    }

    #[test]
    fn quasi_morse_second_derivative_by_second_difference() {
        let u = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
        let h = 1e-4;
        let fd = (u.value_unchecked(1.0 + h) - 2.0 * u.value_unchecked(1.0) + u.value_unchecked(1.0 - h)) / (h * h);
        assert!((fd - u.second_deriv(1.0).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn domain_and_singularity_errors() {
        let u = RadialPotential::power_law(4.0, 0.5);
        assert!(matches!(u.value(-1.0), Err(SwarmError::Domain(_))));
        assert!(matches!(u.deriv(0.0), Err(SwarmError::Singularity { .. })));
        assert_eq!(u.value(0.0).unwrap(), 0.0);
        assert_eq!(RadialPotential::power_law(4.0, 1.0).deriv(0.0).unwrap(), -1.0);
    }

    #[test]
    fn derivative_vanishes_far_away_for_decaying_families() {
        for u in [
            RadialPotential::quasi_morse(0.6, 0.5, 1.5),
            RadialPotential::morse(1.0, 1.0, 2.0, 0.5),
            RadialPotential::power_law(0.5, 0.25),
        ] {
            assert!(u.deriv(1e4).unwrap().abs() < 1e-1, "{u:?}");
        }
        let qm = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
        assert!(qm.deriv(60.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn config_round_trip() {
        let u: RadialPotential = serde_json::from_str(r#"{"family":"power_law","a":4,"b":1}"#).unwrap();
        assert_eq!(u, RadialPotential::power_law(4.0, 1.0));
        let m: RadialPotential =
            serde_json::from_str(r#"{"family":"morse","C_A":1,"ell_A":1,"C_R":2,"ell_R":0.5}"#).unwrap();
        assert_eq!(m, RadialPotential::morse(1.0, 1.0, 2.0, 0.5));
        let q: RadialPotential = serde_json::from_str(r#"{"family":"quasi_morse","C":0.6,"l":0.5,"p":1.5}"#).unwrap();
        let back: RadialPotential = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        assert_eq!(q, back);
        assert!(serde_json::from_str::<RadialPotential>(r#"{"family":"power_law","a":4,"b":1,"c":2}"#).is_err());
    }

    #[test]
    fn validation() {
        assert!(RadialPotential::power_law(1.0, 2.0).validate().is_err());
        assert!(RadialPotential::quasi_morse(0.6, -0.5, 1.5).validate().is_err());
        assert!(RadialPotential::morse(1.0, 1.0, 2.0, 0.5).validate().is_ok());
    }
}
