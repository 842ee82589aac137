//! Energy-dissipating feedback bringing a random cloud to rest at an equilibrium, compared with
//! the free swarm from the same start.
//!
//!     cargo run --release --example jq_stabilization

use swarmctl::controllers::{gamma_lower_bound, jq_feedback, JqParams};
use swarmctl::dynamics::{simulate, RandomInit, SimConfig, ZeroControl};
use swarmctl::model::{threshold_m_alpha_beta, ModelParams, RadialPotential};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
    let params = ModelParams::new(2.0, 1.5, 2.0, 50)?;
    println!(
        "M = {} (threshold {:.3}), gamma lower bound {:.3}",
        params.m,
        threshold_m_alpha_beta(&params),
        gamma_lower_bound(&params)
    );
    let init = RandomInit::centered(1.5, 0.0).sample(params.n, 3)?;
    let cfg = SimConfig::new(0.02, 100.0).with_record_every(250);

    let law = jq_feedback(&params, JqParams::above_bound(&params, 2.0))?;
    let controlled = simulate(&init, &pot, &params, &law, &cfg)?;
    let free = simulate(&init, &pot, &params, &ZeroControl, &cfg)?;

    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "t", "V (ctrl)", "max|v|", "max|F|", "V (free)");
    for k in 0..controlled.len() {
        println!(
            "{:>6.1} {:>12.5} {:>12.3e} {:>12.3e} {:>12.5}",
            controlled.times[k], controlled.energy[k], controlled.max_speed[k], controlled.max_force[k], free.energy[k]
        );
    }
    println!("largest applied |u|: {:.4}", controlled.max_control());
    Ok(())
}
