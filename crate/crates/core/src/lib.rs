//! Self-propelled swarms with pairwise attraction-repulsion and bounded controls.
//!
//! Each agent obeys `x' = v`, `v' = (alpha - beta |v|^2) v - F_i(x) + u_i` with
//! `|u_i| <= M`, where `F_i` is the gradient of a radial pair potential. The crate
//! integrates this system, analyses its rings (mill radius, linear stability,
//! spectrum of the position linearization) and builds feedback laws and multi-phase
//! maneuvers that steer a swarm to rest, to a flock or to a mill.
//!
//! - [`model`]: potentials, parameters, forces and energies.
//! - [`dynamics`]: RK4 integration with per-stage saturation, trajectories, order parameters.
//! - [`controllers`]: stabilizing feedback, braking, tracking and receding-horizon laws.
//! - [`analysis`]: ring radii, reduced mill system, stability and G-matrix spectra.
//! - [`maneuvers`]: phase runner and the flock, mill and ring-construction pipelines.
//! - [`io`]: scenario files, the built-in registry, artifacts and SVG plots.
//!
//! The `examples/` directory has one runnable program per capability.

// `!(x > 0.0)` is used on purpose so NaN is rejected; index loops mirror the math.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod io;
pub mod analysis;
pub mod controllers;
pub mod dynamics;
pub mod maneuvers;
pub mod model;

pub use error::{Result, SwarmError};
