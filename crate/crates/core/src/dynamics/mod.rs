//! Time integration of the controlled system, saturation, trajectory recording and order
//! parameters.

pub mod export;
pub mod init;
pub mod integrator;
pub mod law;
pub mod order;
pub mod trajectory;

pub use export::{summary_json, trajectory_csv};
pub use init::{rng_from_seed, RandomInit};
pub use integrator::{rhs, simulate, simulate_until, step, Derivative, Probe, SimConfig, StopPredicate};
pub use law::{eval_at_state, saturate, saturate_in_place, ControlLaw, FnLaw, LawContext, ZeroControl};
pub use order::{order_parameters, OrderParameters};
pub use trajectory::{PhaseRecord, StopReason, Trajectory};
