//! Built-in scenarios reproducing the reference experiments.

use std::f64::consts::PI;

use serde_json::json;

use super::scenario::{Check, Comparator, InitSpec, Metric, RunSpec, Scenario, SimSettings, Targets, Variant};
use crate::analysis::{solve_ring_radius, RingType};
use crate::controllers::{InstantaneousSpec, LawConfig, SharedRotation};
use crate::error::{Result, SwarmError};
use crate::maneuvers::PipelineOptions;
use crate::model::{ModelParams, RadialPotential, Vec2};

const NAMES: [&str; 7] = [
    "fig-step11",
    "fig-quasi",
    "fig-mill1",
    "fig-instcont",
    "fig-mill2flock",
    "thm2-blowup",
    "thm2-ring",
];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

fn base(name: &str, description: &str, potential: RadialPotential, params: ModelParams) -> Scenario {
    Scenario {
        name: name.into(),
        description: description.into(),
        potential,
        params,
        init: InitSpec::Random {
            bounds: [-1.0, -1.0, 1.0, 1.0],
            speed_disk: 0.0,
        },
        run: RunSpec::Law { law: LawConfig::Zero },
        sim: SimSettings::default(),
        baseline: None,
        targets: Targets::default(),
        variants: Vec::new(),
        checks: Vec::new(),
        budget_seconds: None,
    }
}

fn variant(label: &str, key: &str, value: serde_json::Value) -> Variant {
    Variant {
        label: label.into(),
        set: [(key.to_string(), value)].into(),
    }
}

fn quasi_morse_setup() -> (RadialPotential, ModelParams) {
    (
        RadialPotential::quasi_morse(0.6, 0.5, 1.5),
        ModelParams::new(2.0, 1.5, 2.0, 200).expect("valid"),
    )
}

fn power_law_setup(n: usize) -> (RadialPotential, ModelParams) {
    (
        RadialPotential::power_law(4.0, 1.0),
        ModelParams::new(10.0, 3.0, 10.0, n).expect("valid"),
    )
}

fn blowup_setup() -> (RadialPotential, ModelParams) {
    (
        RadialPotential::power_law(0.5, 0.25),
        ModelParams::new(1.0, 1.0, 5.0, 5).expect("valid"),
    )
}

fn fig_step11() -> Scenario {
    let (pot, params) = quasi_morse_setup();
    let c = params.cruise_speed();
    let mut s = base(
        "fig-step11",
        "200 agents at rest in [-2,2]^2 under the energy-dissipating feedback, against the free swarm",
        pot,
        params,
    );
    s.init = InitSpec::Random {
        bounds: [-2.0, -2.0, 2.0, 2.0],
        speed_disk: 0.0,
    };
    s.run = RunSpec::Law {
        law: LawConfig::Jq { gamma: None },
    };
    s.baseline = Some(LawConfig::Zero);
    s.sim = SimSettings {
        dt: 0.02,
        t_end: 200.0,
        record_every: 50,
        seed: 0,
    };
    s.checks = vec![
        Check::new(Metric::FinalMaxSpeed, Comparator::Lt, 1e-2),
        Check::new(Metric::FinalMaxForce, Comparator::Lt, 1e-1),
        Check::new(Metric::EnergyExcess, Comparator::Le, 0.0),
        Check::new(Metric::MaxControl, Comparator::Le, 2.0 + 1e-12),
        Check::approx(Metric::FinalMeanSpeed, c, 1e-2).on_baseline(),
    ];
    s.budget_seconds = Some(180.0);
    s
}

fn fig_quasi() -> Scenario {
    let (pot, params) = quasi_morse_setup();
    let mut s = base(
        "fig-quasi",
        "Quasi-static heading change of a 200-agent flock over T = 100",
        pot,
        params,
    );
    s.init = InitSpec::Flock {
        bounds: [-2.0, -2.0, 2.0, 2.0],
        heading: 0.0,
        relax_tol: 1e-6,
    };
    s.run = RunSpec::FlockToFlock {
        theta0: 0.0,
        theta_t: PI / 2.0,
        t_total: 100.0,
        envelope: 10.0,
        options: PipelineOptions {
            hold: 10.0,
            ..Default::default()
        },
    };
    s.sim = SimSettings {
        dt: 0.02,
        t_end: 120.0,
        record_every: 50,
        seed: 0,
    };
    s.variants = vec![
        variant("theta-quarter", "run.thetaT", json!(PI / 4.0)),
        variant("theta-half-turn", "run.thetaT", json!(PI)),
    ];
    s.checks = vec![
        Check::new(Metric::HeadingError, Comparator::Lt, 0.05),
        Check::new(Metric::FinalSpeedDev, Comparator::Lt, 1e-3),
        Check::new(Metric::RelativeDrift, Comparator::Lt, 1e-2),
        Check::new(Metric::MaxControl, Comparator::Le, 2.0 + 1e-12),
    ];
    s.budget_seconds = Some(240.0);
    s
}

fn fig_mill1() -> Scenario {
    let (pot, params) = power_law_setup(200);
    let mut s = base(
        "fig-mill1",
        "Uncontrolled 200-agent mill started on a ring of twice the solved radius; variants perturb the \
         initial radius and velocity angle",
        pot,
        params,
    );
    s.init = InitSpec::Ring {
        ring: RingType::Mill,
        radius: None,
        radius_scale: 2.0,
        center: Vec2::ZERO,
        phase: 0.0,
        orientation: 1.0,
        heading: 0.0,
        gamma0: 0.0,
    };
    s.sim = SimSettings {
        dt: 0.01,
        t_end: 60.0,
        record_every: 100,
        seed: 0,
    };
    s.targets.radius = solve_ring_radius(&s.potential, &s.params, 200, RingType::Mill).ok();
    s.variants = vec![
        variant("r0-0.8", "init.radius_scale", json!(0.8)),
        variant("r0-1.5", "init.radius_scale", json!(1.5)),
        variant("gamma0-0.5", "init.gamma0", json!(0.5)),
        variant("gamma0-1.0", "init.gamma0", json!(1.0)),
    ];
    s.checks = vec![Check::new(Metric::FinalRadiusAbsError, Comparator::Lt, 1e-2)];
    s.budget_seconds = Some(120.0);
    s
}

fn fig_instcont() -> Scenario {
    let (pot, params) = power_law_setup(20);
    let r_mill = solve_ring_radius(&pot, &params, 20, RingType::Mill).expect("mill radius exists");
    let mut s = base(
        "fig-instcont",
        "Receding-horizon control from a 20-agent flock ring to the mill",
        pot,
        params,
    );
    s.init = InitSpec::Ring {
        ring: RingType::Flock,
        radius: None,
        radius_scale: 1.0,
        center: Vec2::ZERO,
        phase: 0.0,
        orientation: 1.0,
        heading: 0.0,
        gamma0: 0.0,
    };
    s.run = RunSpec::Law {
        law: LawConfig::InstantaneousMill {
            spec: InstantaneousSpec {
                r_target: r_mill,
                rotation: SharedRotation::Polar,
                ..Default::default()
            },
        },
    };
    s.sim = SimSettings {
        dt: 0.01,
        t_end: 40.0,
        record_every: 20,
        seed: 0,
    };
    s.targets.radius = Some(r_mill);
    s.checks = vec![
        Check::new(Metric::FinalAngMomentum, Comparator::Gt, 0.98),
        Check::new(Metric::FinalRadiusRelError, Comparator::Lt, 0.05),
        Check::new(Metric::MaxControl, Comparator::Le, 10.0 + 1e-12),
    ];
    s.budget_seconds = Some(60.0);
    s
}

fn fig_mill2flock() -> Scenario {
    let (pot, params) = power_law_setup(20);
    let c = params.cruise_speed();
    let r_flock = solve_ring_radius(&pot, &params, 20, RingType::Flock).expect("flock radius exists");
    let mut s = base(
        "fig-mill2flock",
        "Receding-horizon control from a 20-agent mill to a flock ring heading along x2",
        pot,
        params,
    );
    s.init = InitSpec::Ring {
        ring: RingType::Mill,
        radius: None,
        radius_scale: 1.0,
        center: Vec2::ZERO,
        phase: 0.0,
        orientation: 1.0,
        heading: 0.0,
        gamma0: 0.0,
    };
    s.run = RunSpec::Law {
        law: LawConfig::InstantaneousFlock {
            spec: InstantaneousSpec {
                r_target: r_flock,
                v_bar: Vec2::new(0.0, c),
                ..Default::default()
            },
        },
    };
    s.sim = SimSettings {
        dt: 0.01,
        t_end: 40.0,
        record_every: 20,
        seed: 0,
    };
    s.targets = Targets {
        radius: Some(r_flock),
        heading: Some(PI / 2.0),
    };
    s.checks = vec![
        Check::new(Metric::FinalPolarization, Comparator::Gt, 0.99),
        Check::new(Metric::MaxControl, Comparator::Le, 10.0 + 1e-12),
    ];
    s.budget_seconds = Some(30.0);
    s
}

fn fig_blowup() -> Scenario {
    let (pot, params) = blowup_setup();
    let mut s = base(
        "thm2-blowup",
        "Five agents braked, then pushed apart by a repulsive surrogate until all pairs are 10 apart",
        pot,
        params,
    );
    s.init = InitSpec::Random {
        bounds: [-0.5, -0.5, 0.5, 0.5],
        speed_disk: 0.2,
    };
    s.run = RunSpec::Blowup {
        eta: 0.05,
        big_l: 10.0,
        options: PipelineOptions::default(),
    };
    s.sim = SimSettings {
        dt: 0.05,
        t_end: 10.0,
        record_every: 1,
        seed: 9,
    };
    s.checks = vec![
        Check::new(Metric::FinalMinDistance, Comparator::Gt, 10.0),
        Check::new(Metric::ExtractionDecrease, Comparator::Le, 1e-8),
        Check::new(Metric::MaxControl, Comparator::Le, 5.0 + 1e-12),
    ];
    s.budget_seconds = Some(20.0);
    s
}

fn fig_ring() -> Scenario {
    let (pot, params) = blowup_setup();
    let mut s = base(
        "thm2-ring",
        "Blow-up, circular placement and radius change of five agents onto the mill",
        pot,
        params,
    );
    s.init = InitSpec::Random {
        bounds: [-0.5, -0.5, 0.5, 0.5],
        speed_disk: 0.2,
    };
    s.run = RunSpec::RingConstruction {
        eta: 0.05,
        big_l: 10.0,
        radius: None,
        r_to: None,
        duration: None,
        r_bar: None,
        options: PipelineOptions {
            hold: 20.0,
            ..Default::default()
        },
    };
    s.sim = SimSettings {
        dt: 0.05,
        t_end: 10.0,
        record_every: 10,
        seed: 9,
    };
    s.checks = vec![
        Check::new(Metric::FinalMillDiagnostics, Comparator::Lt, 1e-2),
        Check::new(Metric::PlacementMinDistance, Comparator::Gt, 10.0),
        Check::new(Metric::MaxControl, Comparator::Le, 5.0 + 1e-12),
    ];
    s.budget_seconds = Some(30.0);
    s
}

/// A registry scenario by name.
pub fn builtin(name: &str) -> Result<Scenario> {
    Ok(match name {
        "fig-step11" => fig_step11(),
        "fig-quasi" => fig_quasi(),
        "fig-mill1" => fig_mill1(),
        "fig-instcont" => fig_instcont(),
        "fig-mill2flock" => fig_mill2flock(),
        "thm2-blowup" => fig_blowup(),
        "thm2-ring" => fig_ring(),
        _ => {
            return Err(SwarmError::Config(format!(
                "unknown scenario '{name}'; built-in: {}",
                NAMES.join(", ")
            )))
        }
    })
}
