//! Core types, interaction potentials, pairwise forces, energy and control-bound thresholds.

pub mod bounds;
pub mod forces;
pub mod params;
pub mod potential;
pub mod state;
pub mod vec2;

pub use bounds::{force_bounds, grad_lipschitz_bound, Bound, ForceBounds};
pub use forces::{
    energy_rate, hessian_w, interaction_forces, interaction_forces_into, kinetic_energy, pair_gradient,
    potential_energy, total_energy, Mat2, GUARD_RADIUS,
};
pub use params::{threshold_m_alpha_beta, ModelParams};
pub use potential::RadialPotential;
pub use state::{min_pair_distance, SwarmState};
pub use vec2::{centroid, sup_norm, Vec2};
