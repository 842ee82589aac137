//! Random cloud to a rotating mill of the solved radius about the origin.
//!
//!     cargo run --release --example mill_pipeline

use swarmctl::analysis::{mill_diagnostics_with, solve_ring_radius, RingType};
use swarmctl::dynamics::RandomInit;
use swarmctl::maneuvers::{mill_pipeline, PipelineOptions};
use swarmctl::model::{ModelParams, RadialPotential, Vec2};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::power_law(4.0, 1.0);
    let params = ModelParams::new(10.0, 3.0, 10.0, 20)?;
    let r = solve_ring_radius(&pot, &params, params.n, RingType::Mill)?;
    let init = RandomInit::centered(1.0, 0.5).sample(params.n, 2)?;

    let tr = mill_pipeline(&init, &pot, &params, Vec2::ZERO, r, 1e-3, &PipelineOptions::default())?;
    for p in &tr.phases {
        println!("{:<14} {:>8.2} -> {:>8.2}", p.name, p.t_start, p.t_end);
    }
    let d = mill_diagnostics_with(tr.final_state(), &params, Some(r));
    println!("target radius {r:.6}; final diagnostics {d:?}");
    Ok(())
}
