//! Scenario files, the built-in registry, artifact writers and SVG plots.

pub mod artifacts;
pub mod config;
pub mod overrides;
pub mod registry;
pub mod scenario;
pub mod svg;

pub use artifacts::{output_root, write_outcome, write_run, ArtifactOptions, OutputFormat};
pub use config::{schemas, ManeuverConfig, SimulateConfig};
pub use overrides::{parse_assignment, parse_value, set_path};
pub use registry::{builtin, builtin_names};
pub use scenario::{
    compute_metrics, run_scenario, Check, CheckResult, CheckTarget, Comparator, InitSpec, Metric, RunOutcome,
    RunSpec, Scenario, ScenarioOutcome, SimSettings, Targets, Variant,
};
