//! Feedback laws, each a [`ControlLaw`](crate::dynamics::ControlLaw) constructor.

pub mod cancel;
pub mod config;
pub mod fictitious;
pub mod instantaneous;
pub mod jq;
pub mod mill;
pub mod quasi;
pub mod reference;
pub mod sparse;

pub use cancel::{
    cancel_and_inject, flock_hold, pd_tracking, velocity_kill, CancelAndInject, FlockHold, PdTracking, VelocityKill,
    DEFAULT_PD_GAINS,
};
pub use config::{LawConfig, ReferenceConfig};
pub use fictitious::{
    build_repulsive_surrogate, fictitious_potential_control, surrogate_cutoff_radius, surrogate_forces_into,
    FictitiousControl, RepulsiveSurrogate, SurrogateDeriv,
};
pub use instantaneous::{
    instantaneous_flock_control, instantaneous_mill_control, solve_instantaneous_flock, solve_instantaneous_mill,
    FlockSolution, InstantSolution, InstantaneousFlock, InstantaneousMill, InstantaneousSpec, MillVelocityTarget,
    SharedRotation,
};
pub use jq::{gamma_lower_bound, jq_feedback, JqFeedback, JqParams};
pub use mill::{mill_centripetal, mill_centripetal_clusters, mill_velocity_feedback, MillCentripetal, MillVelocityFeedback};
pub use quasi::{quasi_static_rotation, QuasiStaticPlan, QuasiStaticRotation};
pub use reference::{
    smoothstep5, FixedPoints, RefSample, ReferencePath, RingMotion, RingPath, StraightMoves, VelocityRamp,
};
pub use sparse::{sparsify, Sparsify};
