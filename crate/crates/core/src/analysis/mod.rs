//! Rings, mill radii, linear stability and distances to flock and mill sets.

pub mod equilibrium;
pub mod gmatrix;
pub mod linear;
pub mod manifold;
pub mod mill_radius;
pub mod reduced;
pub mod report;
pub mod ring;

pub use equilibrium::{relax_positions, Relaxed};
pub use gmatrix::{first_order_g, g_matrix, jacobi_eigenvalues, DenseMatrix, GSpectrum, ZERO_EIG_TOL};
pub use linear::{char_coeffs, cubic_roots, eigenvalues3, routh_hurwitz_stable, RouthHurwitz};
pub use manifold::{
    distance_to_flock_manifold, min_enclosing_circle, mill_diagnostics, mill_diagnostics_with, position_gap,
    ManifoldDistance, MillDiagnostics, THETA_GRID,
};
pub use mill_radius::{mill_radius_residual, mill_radius_roots, mill_radius_solve, scan_roots, solve_ring_radius, RingType};
pub use reduced::{
    integrate_reduced, mill_linearization_matrix, phi_of_r, phi_prime_fd, phi_prime_power_law, reduced_mill_rhs, Mat3,
    PhiConvention, ReducedState,
};
pub use report::{analysis_report, AnalysisReport};
pub use ring::{ring_positions, ring_state, RingKind, RingSpec};
