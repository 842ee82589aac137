use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SwarmError};
use crate::model::{min_pair_distance, Vec2, GUARD_RADIUS};

/// Indices of the convex hull vertices in counterclockwise order, collinear points dropped
/// (Andrew's monotone chain).
pub fn convex_hull(x: &[Vec2]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].x.total_cmp(&x[b].x).then(x[a].y.total_cmp(&x[b].y)).then(a.cmp(&b)));
    if idx.len() < 3 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| (x[a] - x[o]).cross(x[b] - x[o]);
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for &p in &idx {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in idx.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// A hull vertex that can be pushed away from the rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterVertex {
    pub index: usize,
    /// Unit outward bisector of the external angle.
    pub bisector: Vec2,
    /// Internal hull angle at the vertex; zero for a segment endpoint.
    pub angle: f64,
    /// Number of hull vertices.
    pub hull_size: usize,
}

impl OuterVertex {
    /// Lower bound on `cos` of the angle between `z` and any `x_vertex - x_j`.
    pub fn projection_bound(&self) -> f64 {
        (0.5 * self.angle).cos()
    }
}

/// Hull vertex with the smallest internal angle (ties to the lowest index).
///
/// Every other point lies in the cone spanned by the two hull edges at that vertex, so the
/// direction to the vertex makes an angle of at most half the internal angle with `z`.
pub fn outer_vertex(x: &[Vec2]) -> Result<OuterVertex> {
    if x.len() < 2 {
        return Err(SwarmError::Degenerate("outer vertex needs at least two points".into()));
    }
    let (d, i, j) = min_pair_distance(x);
    if d < GUARD_RADIUS {
        return Err(SwarmError::Degenerate(format!("points {i} and {j} coincide")));
    }
    let hull = convex_hull(x);
    if hull.len() == 2 {
        // all collinear: take the lower-index endpoint, push along the axis
        let (a, b) = if hull[0] < hull[1] { (hull[0], hull[1]) } else { (hull[1], hull[0]) };
        let z = (x[a] - x[b]).unit().expect("distinct endpoints");
        return Ok(OuterVertex {
            index: a,
            bisector: z,
            angle: 0.0,
            hull_size: 2,
        });
    }
    let h = hull.len();
    let mut best: Option<(f64, usize, Vec2)> = None;
    for k in 0..h {
        let v = hull[k];
        let prev = (x[hull[(k + h - 1) % h]] - x[v]).unit().expect("distinct hull vertices");
        let next = (x[hull[(k + 1) % h]] - x[v]).unit().expect("distinct hull vertices");
        let angle = prev.cross(next).abs().atan2(prev.dot(next));
        let z = (-(prev + next)).unit().unwrap_or_else(|| next.perp());
        let better = match best {
            None => true,
            Some((a, idx, _)) => angle < a - 1e-12 || ((angle - a).abs() <= 1e-12 && v < idx),
        };
        if better {
            best = Some((angle, v, z));
        }
    }
    let (angle, index, bisector) = best.expect("hull has vertices");
    Ok(OuterVertex {
        index,
        bisector,
        angle,
        hull_size: h,
    })
}

/// `cos((N - 2) pi / (2N))`, the guaranteed projection of any pair direction on `z`.
pub fn projection_floor(n: usize) -> f64 {
    let n = n.max(2) as f64;
    ((n - 2.0) * PI / (2.0 * n)).cos()
}
