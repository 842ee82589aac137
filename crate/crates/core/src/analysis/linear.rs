use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::reduced::Mat3;

/// `(a2, a1, a0)` of `det(lambda I - A) = lambda^3 + a2 lambda^2 + a1 lambda + a0`.
pub fn char_coeffs(a: &Mat3) -> (f64, f64, f64) {
    let tr = a[0][0] + a[1][1] + a[2][2];
    let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0] + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    (-tr, minors, -det)
}

/// Roots of `lambda^3 + a2 lambda^2 + a1 lambda + a0`, real roots first in increasing order, each
/// polished by two Newton steps.
pub fn cubic_roots(a2: f64, a1: f64, a0: f64) -> [Complex64; 3] {
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if p == 0.0 && q == 0.0 {
        [Complex64::new(0.0, 0.0); 3]
    } else if disc <= 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let th = arg.acos() / 3.0;
        let mut ys = [0.0; 3];
        for (k, y) in ys.iter_mut().enumerate() {
            *y = m * (th - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
        }
        ys.sort_by(|a, b| a.total_cmp(b));
        ys.map(|y| Complex64::new(y, 0.0))
    } else {
        let sd = disc.sqrt();
        let u = (-q / 2.0 + sd).cbrt();
        let v = (-q / 2.0 - sd).cbrt();
        let re = -(u + v) / 2.0;
        let im = (u - v) * 3f64.sqrt() / 2.0;
        [Complex64::new(u + v, 0.0), Complex64::new(re, im), Complex64::new(re, -im)]
    };
    for z in roots.iter_mut() {
        *z -= shift;
        for _ in 0..2 {
            let f = ((*z + a2) * *z + a1) * *z + a0;
            let df = (3.0 * *z + 2.0 * a2) * *z + a1;
            if df.norm() > 1e-300 {
                let next = *z - f / df;
                if next.re.is_finite() && next.im.is_finite() {
                    *z = next;
                }
            }
        }
    }
    roots
}

/// Eigenvalues of a 3x3 matrix through its characteristic polynomial.
pub fn eigenvalues3(a: &Mat3) -> [Complex64; 3] {
    let (a2, a1, a0) = char_coeffs(a);
    cubic_roots(a2, a1, a0)
}

/// Hurwitz conditions for a monic cubic: `a2 > 0`, `a0 > 0`, `a2 a1 - a0 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouthHurwitz {
    pub stable: bool,
    /// `[a2, a0, a2 a1 - a0]`.
    pub margins: [f64; 3],
}

pub fn routh_hurwitz_stable(a2: f64, a1: f64, a0: f64) -> RouthHurwitz {
    let margins = [a2, a0, a2 * a1 - a0];
    RouthHurwitz {
        stable: margins.iter().all(|m| *m > 0.0),
        margins,
    }
}
