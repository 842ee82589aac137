//! Random cloud to a flock with a prescribed velocity: settle, brake, inject, hold.
//!
//!     cargo run --release --example flock_pipeline

use swarmctl::analysis::relax_positions;
use swarmctl::dynamics::RandomInit;
use swarmctl::maneuvers::{flock_pipeline, PipelineOptions};
use swarmctl::model::{ModelParams, RadialPotential, Vec2};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
    let params = ModelParams::new(2.0, 1.5, 2.0, 20)?;
    let init = RandomInit::centered(1.0, 0.5).sample(params.n, 5)?;
    let target = Vec2::polar(params.cruise_speed(), 0.8);

    let tr = flock_pipeline(&init, &pot, &params, target, 1e-3, &PipelineOptions::default())?;
    for p in &tr.phases {
        println!("{:<10} {:>8.2} -> {:>8.2}  ({:?}, {})", p.name, p.t_start, p.t_end, p.stop, p.predicate);
    }
    let f = tr.final_state();
    println!("final mean velocity {:?}, target {:?}", f.mean_velocity(), target);
    println!("polarization {:.6}", tr.order.last().unwrap().polarization);

    // the positions the swarm settled into are close to a relaxed equilibrium
    let relaxed = relax_positions(&pot, &f.x, 1e-8, 200_000)?;
    let gap = relaxed.x.iter().zip(&f.x).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    println!("largest distance to the nearby equilibrium {gap:.2e}");
    Ok(())
}
