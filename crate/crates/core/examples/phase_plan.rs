//! A phase plan read from JSON: each phase runs one law until its condition holds.
//!
//!     cargo run --release --example phase_plan

use swarmctl::dynamics::RandomInit;
use swarmctl::maneuvers::{run_plan, PhasePlan, PipelineOptions};
use swarmctl::model::{ModelParams, RadialPotential};

const PLAN: &str = r#"[
  {"name": "settle", "law": {"law": "jq"},
   "stop": {"condition": {"kind": "at_rest", "speed": 1e-3, "force": 1e-2}, "max_duration": 400}},
  {"name": "launch", "law": {"law": "flock_hold"},
   "stop": {"condition": {"kind": "speeds_near_cruise", "tol": 1e-4}, "max_duration": 100}}
]"#;

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::power_law(4.0, 1.0);
    let params = ModelParams::new(1.0, 1.0, 5.0, 12)?;
    let plan = PhasePlan::from_json(PLAN)?;
    let init = RandomInit::centered(1.0, 0.5).sample(params.n, 8)?;
    let tr = run_plan(&init, &pot, &params, &plan, &PipelineOptions::default())?;
    for p in &tr.phases {
        println!("{:<8} law {:<12} {:>8.2} -> {:>8.2} ({:?})", p.name, p.law, p.t_start, p.t_end, p.stop);
    }
    println!("final polarization {:.4}", tr.order.last().unwrap().polarization);
    Ok(())
}
