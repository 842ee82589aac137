//! Mill and flock ring radii, linear stability of the mill and the spectrum of the first-order
//! linearization on the flock ring, for a few agent counts.
//!
//!     cargo run --release --example ring_analysis

use swarmctl::analysis::{analysis_report, mill_diagnostics_with, ring_state, RingKind, RingSpec};
use swarmctl::dynamics::{simulate, SimConfig, ZeroControl};
use swarmctl::model::{ModelParams, RadialPotential, Vec2};

fn main() -> swarmctl::Result<()> {
    let pot = RadialPotential::power_law(4.0, 1.0);
    for n in [2, 8, 20, 100] {
        let params = ModelParams::new(10.0, 3.0, 10.0, n)?;
        let rep = analysis_report(&pot, &params)?;
        println!(
            "N={n:>3}: mill R {:.6}, flock R {}, char. coeffs [{:.3}, {:.3}, {:.3}], stable {}, G zero modes {:?}",
            rep.radius,
            rep.r_flock.map_or("-".into(), |r| format!("{r:.6}")),
            rep.char_coeffs[0],
            rep.char_coeffs[1],
            rep.char_coeffs[2],
            rep.stable,
            rep.g_zero_count
        );
    }

    // a mill ring left alone stays a mill
    let params = ModelParams::new(10.0, 3.0, 10.0, 20)?;
    let r = analysis_report(&pot, &params)?.radius;
    let mill = ring_state(&RingSpec::mill(Vec2::ZERO, r, 0.0, 1.0, &params), &params, RingKind::Mill)?;
    let tr = simulate(&mill, &pot, &params, &ZeroControl, &SimConfig::new(1e-3, 20.0).with_record_every(5000))?;
    for s in &tr.states {
        println!("t {:>5.1}: mill diagnostic {:.2e}", s.t, mill_diagnostics_with(s, &params, Some(r)).max());
    }
    Ok(())
}
