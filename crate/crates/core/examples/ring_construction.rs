//! From a tight cluster to a mill: brake, blow the swarm apart with a repulsive surrogate,
//! place everyone on a large circle, spin up and shrink the circle to the mill radius.
//!
//!     cargo run --release --example ring_construction

use swarmctl::analysis::{mill_diagnostics_with, solve_ring_radius, RingType};
use swarmctl::dynamics::RandomInit;
use swarmctl::maneuvers::{ring_pipeline, PipelineOptions};
use swarmctl::model::{min_pair_distance, ModelParams, RadialPotential};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::power_law(0.5, 0.25);
    let params = ModelParams::new(1.0, 1.0, 5.0, 5)?;
    let r_to = solve_ring_radius(&pot, &params, params.n, RingType::Mill)?;
    let init = RandomInit::centered(0.5, 0.2).sample(params.n, 9)?;
    let opts = PipelineOptions {
        dt: 0.05,
        hold: 20.0,
        ..Default::default()
    };
    let (eta, big_l) = (0.05, 10.0);
    let tr = ring_pipeline(&init, &pot, &params, eta, big_l, None, r_to, None, r_to, 9, &opts)?;
    for p in &tr.phases {
        let dmin = min_pair_distance(&tr.states[p.last_sample].x).0;
        println!("{:<16} {:>9.2} -> {:>9.2}  min distance at end {:>8.3}", p.name, p.t_start, p.t_end, dmin);
    }
    let d = mill_diagnostics_with(tr.final_state(), &params, Some(r_to));
    println!("mill radius {r_to:.4}; final diagnostics {d:?}; max |u| {:.3}", tr.max_control());
    Ok(())
}
