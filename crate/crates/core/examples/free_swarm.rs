//! Uncontrolled swarm: speeds relax to the cruise speed sqrt(alpha/beta) while the interaction
//! keeps the group together.
//!
//!     cargo run --release --example free_swarm

use swarmctl::dynamics::{simulate, trajectory_csv, RandomInit, SimConfig, ZeroControl};
use swarmctl::model::{ModelParams, RadialPotential};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::morse(1.0, 2.0, 0.5, 0.5);
    let params = ModelParams::new(1.0, 0.5, 1.0, 40)?;
    let init = RandomInit::centered(2.0, 1.0).sample(params.n, 7)?;
    let tr = simulate(&init, &pot, &params, &ZeroControl, &SimConfig::new(0.01, 60.0).with_record_every(500))?;

    println!("cruise speed {:.4}", params.cruise_speed());
    println!("{:>6} {:>10} {:>12} {:>12} {:>11}", "t", "energy", "mean speed", "polarization", "ang. mom.");
    for (k, o) in tr.order.iter().enumerate() {
        println!(
            "{:>6.1} {:>10.4} {:>12.4} {:>12.4} {:>11.4}",
            tr.times[k], tr.energy[k], o.mean_speed, o.polarization, o.ang_momentum
        );
    }
    let csv = trajectory_csv(&tr);
    println!("trajectory csv: {} rows", csv.lines().count() - 1);
    Ok(())
}
