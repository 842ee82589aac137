//! Multi-phase pipelines: settle, brake, inject and hold for flocks and mills, heading changes,
//! and the blow-up / circular placement / radius change sequence for reaching rings from any
//! configuration.

pub mod blowup;
pub mod flock;
pub mod geometry;
pub mod mill;
pub mod plan;
pub mod runner;
pub mod tracking;

pub use blowup::{
    blowup_pipeline, circular_placement, extraction_audit, min_angular_separation, pick_center, placement_radius, radius_shrink, ring_pipeline,
    shrink_budget, ExtractionAudit, Placement, RingKindTag,
};
pub use flock::{
    diameter, flock_pipeline, flock_to_flock, is_flock_along, mill_to_flock, relative_drift, settle_tolerance,
    transition_report, SettleTolerance, TransitionReport,
};
pub use geometry::{convex_hull, outer_vertex, projection_floor, OuterVertex};
pub use mill::{is_mill_on, mill_pipeline, mill_pipeline_clusters, ring_targets, MillCluster};
pub use plan::{run_plan, PhasePlan, PhaseSpec, StopCondition, StopSpec};
pub use runner::{PhaseRunner, PipelineOptions};
