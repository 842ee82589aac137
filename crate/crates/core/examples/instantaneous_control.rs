//! Receding-horizon control: one shared control, rotated per agent, turns a flock ring into a
//! mill.
//!
//!     cargo run --release --example instantaneous_control

use swarmctl::analysis::{ring_state, solve_ring_radius, RingKind, RingSpec, RingType};
use swarmctl::controllers::{InstantaneousMill, InstantaneousSpec, SharedRotation};
use swarmctl::dynamics::{simulate, SimConfig};
use swarmctl::model::{ModelParams, RadialPotential, Vec2};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::power_law(4.0, 1.0);
    let params = ModelParams::new(10.0, 3.0, 10.0, 20)?;
    let c = params.cruise_speed();
    let r_flock = solve_ring_radius(&pot, &params, params.n, RingType::Flock)?;
    let r_mill = solve_ring_radius(&pot, &params, params.n, RingType::Mill)?;
    let init = ring_state(
        &RingSpec::flock(Vec2::ZERO, r_flock, 0.0, params.n),
        &params,
        RingKind::Flock { v_bar: Vec2::new(c, 0.0) },
    )?;
    let law = InstantaneousMill {
        spec: InstantaneousSpec {
            r_target: r_mill,
            rotation: SharedRotation::Polar,
            ..Default::default()
        },
    };
    let tr = simulate(&init, &pot, &params, &law, &SimConfig::new(0.01, 40.0).with_record_every(400))?;
    println!("target radius {r_mill:.4}");
    for (k, o) in tr.order.iter().enumerate() {
        println!(
            "t {:>5.1}: ang. momentum {:.4}, polarization {:.4}, mean radius {:.4}",
            tr.times[k], o.ang_momentum, o.polarization, o.mean_radius
        );
    }
    Ok(())
}
