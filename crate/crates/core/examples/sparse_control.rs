//! Componentwise sparse control: the stabilizing feedback is applied to one agent at a time in
//! round-robin slots, each slot carrying the full bound.
//!
//!     cargo run --release --example sparse_control

use swarmctl::controllers::{jq_feedback, sparsify, JqParams};
use swarmctl::dynamics::{simulate, RandomInit, SimConfig};
use swarmctl::model::{threshold_m_alpha_beta, ModelParams, RadialPotential};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::quasi_morse(0.6, 0.5, 1.5);
    let params = ModelParams::new(2.0, 1.5, 2.0, 6)?;
    let bound = 1.5 * params.n as f64 * threshold_m_alpha_beta(&params);
    let init = RandomInit::centered(1.0, 0.3).sample(params.n, 4)?;
    let dense = jq_feedback(&params.with_m(bound), JqParams::above_bound(&params.with_m(bound), 2.0))?;
    let law = sparsify(dense, &params, 0.05, bound);
    let tr = simulate(&init, &pot, &params.with_m(bound), &law, &SimConfig::new(0.005, 200.0).with_record_every(4000))?;
    for k in 0..tr.len() {
        let active = tr.controls[k].iter().filter(|u| u.norm() > 0.0).count();
        println!(
            "t {:>6.1}: energy {:>9.5}, max |v| {:.3e}, agents with nonzero control {active}",
            tr.times[k], tr.energy[k], tr.max_speed[k]
        );
    }
    Ok(())
}
