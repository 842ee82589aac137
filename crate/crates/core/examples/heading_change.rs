//! Quasi-static turn of a flock: the same slowly rotating control for every agent keeps the
//! formation rigid while the heading follows the plan.
//!
//!     cargo run --release --example heading_change

use std::f64::consts::PI;

use swarmctl::analysis::relax_positions;
use swarmctl::controllers::QuasiStaticPlan;
use swarmctl::dynamics::RandomInit;
use swarmctl::maneuvers::{flock_to_flock, relative_drift, transition_report, PipelineOptions};
use swarmctl::model::{ModelParams, RadialPotential, SwarmState, Vec2};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
    let params = ModelParams::new(2.0, 1.5, 2.0, 30)?;
    let c = params.cruise_speed();
    let cloud = RandomInit::centered(1.5, 0.0).sample(params.n, 1)?;
    let x = relax_positions(&pot, &cloud.x, 1e-8, 500_000)?.x;
    let init = SwarmState::new(0.0, x, vec![Vec2::new(c, 0.0); params.n])?;

    for t_total in [25.0, 50.0, 100.0] {
        let plan = QuasiStaticPlan::new(&params, 0.0, PI / 2.0, t_total);
        let tr = flock_to_flock(&init, &pot, &params, plan, 10.0, &PipelineOptions { hold: 0.0, ..Default::default() })?;
        let rep = transition_report(&tr, &params, PI / 2.0);
        println!(
            "T = {t_total:>5}: heading lag {:.4} rad, relative drift {:.2e}, max |u| {:.4}",
            rep.lag,
            relative_drift(&tr.final_state().x, &init.x),
            tr.max_control()
        );
    }
    Ok(())
}
