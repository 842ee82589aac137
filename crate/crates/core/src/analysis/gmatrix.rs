use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};
use crate::model::{hessian_w, min_pair_distance, RadialPotential, Vec2, GUARD_RADIUS};

/// Eigenvalues with magnitude below this count as zero.
pub const ZERO_EIG_TOL: f64 = 1e-8;

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                m = m.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        m
    }
}

/// `G` together with its spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GSpectrum {
    pub matrix: DenseMatrix,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub zero_count: usize,
    /// Largest eigenvalue outside the zero band, `None` if all are zero.
    pub max_nonzero: Option<f64>,
}

/// Linearization of the first-order dynamics around stationary positions: off-diagonal blocks
/// `Hess W(x_i - x_j)`, diagonal blocks minus the sum of the row.
pub fn g_matrix(pot: &RadialPotential, xhat: &[Vec2]) -> Result<DenseMatrix> {
    let n = xhat.len();
    if n >= 2 {
        let (d, i, j) = min_pair_distance(xhat);
        if d < GUARD_RADIUS {
            return Err(SwarmError::Collision { i, j, distance: d, t: None });
        }
    }
    let mut g = DenseMatrix::zeros(2 * n);
    for i in 0..n {
        let mut diag = [[0.0; 2]; 2];
        for j in 0..n {
            if i == j {
                continue;
            }
            let h = hessian_w(pot, xhat[i] - xhat[j])?;
            for a in 0..2 {
                for b in 0..2 {
                    g.set(2 * i + a, 2 * j + b, h[a][b]);
                    diag[a][b] -= h[a][b];
                }
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                g.set(2 * i + a, 2 * i + b, diag[a][b]);
            }
        }
    }
    Ok(g)
}

pub fn first_order_g(pot: &RadialPotential, xhat: &[Vec2]) -> Result<GSpectrum> {
    let matrix = g_matrix(pot, xhat)?;
    let eigenvalues = jacobi_eigenvalues(&matrix);
    let zero_count = eigenvalues.iter().filter(|l| l.abs() < ZERO_EIG_TOL).count();
    let max_nonzero = eigenvalues
        .iter()
        .copied()
        .filter(|l| l.abs() >= ZERO_EIG_TOL)
        .fold(None, |m: Option<f64>, l| Some(m.map_or(l, |m| m.max(l))));
    Ok(GSpectrum {
        matrix,
        eigenvalues,
        zero_count,
        max_nonzero,
    })
}

/// Cyclic Jacobi rotations on the symmetric part of `m`; eigenvalues in ascending order.
pub fn jacobi_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let n = m.n;
    let mut a = m.clone();
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, s);
            a.set(j, i, s);
        }
    }
    let scale: f64 = a.data.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a.get(i, j) * a.get(i, j);
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_small() {
        let m = DenseMatrix {
            n: 2,
            data: vec![2.0, 1.0, 1.0, 2.0],
        };
        let ev = jacobi_eigenvalues(&m);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn pair_at_equilibrium() {
        // N=2 at r=1 for U = r^4/4 - r: the only stiff mode is along the bond, U''(1) = 3,
        // and the relative coordinate sees it twice.
        let pot = RadialPotential::power_law(4.0, 1.0);
        let s = first_order_g(&pot, &[Vec2::ZERO, Vec2::new(1.0, 0.0)]).unwrap();
        assert_eq!(s.zero_count, 3);
        assert!((s.max_nonzero.unwrap() + 6.0).abs() < 1e-12);
        assert!(s.matrix.max_asymmetry() < 1e-15);
    }
}
