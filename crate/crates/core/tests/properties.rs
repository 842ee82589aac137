use proptest::prelude::*;

use swarmctl::controllers::{jq_feedback, JqParams};
use swarmctl::dynamics::{order_parameters, saturate};
use swarmctl::io::set_path;
use swarmctl::model::{interaction_forces, min_pair_distance, potential_energy, ModelParams, RadialPotential, SwarmState, Vec2};

fn cloud(n: usize) -> impl Strategy<Value = Vec<Vec2>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Vec2::new(a, b)), n)
        .prop_filter("separated", |x| min_pair_distance(x).0 > 1e-3)
}

fn potentials() -> impl Strategy<Value = RadialPotential> {
    prop_oneof![
        Just(RadialPotential::power_law(4.0, 1.0)),
        Just(RadialPotential::power_law(0.5, 0.25)),
        Just(RadialPotential::quasi_morse(0.6, 0.5, 1.5)),
        Just(RadialPotential::morse(1.0, 2.0, 0.5, 0.5)),
    ]
}

proptest! {
    #[test]
    fn forces_sum_to_zero_and_respect_rigid_motions(
        pot in potentials(),
        x in cloud(7),
        shift in (-5.0..5.0f64, -5.0..5.0f64),
        theta in -3.2..3.2f64,
    ) {
        let f = interaction_forces(&pot, &x).unwrap();
        let scale = f.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let total = f.iter().fold(Vec2::ZERO, |a, b| a + *b);
        prop_assert!(total.norm() <= 1e-12 * scale * x.len() as f64);

        let moved: Vec<Vec2> = x.iter().map(|p| p.rotate(theta) + Vec2::new(shift.0, shift.1)).collect();
        let g = interaction_forces(&pot, &moved).unwrap();
        for (a, b) in f.iter().zip(&g) {
            prop_assert!((a.rotate(theta) - *b).norm() <= 1e-9 * scale);
        }
        let e0 = potential_energy(&pot, &x).unwrap();
        let e1 = potential_energy(&pot, &moved).unwrap();
        prop_assert!((e0 - e1).abs() <= 1e-9 * e0.abs().max(1.0));
    }

    #[test]
    fn saturation_clips_norms_and_keeps_directions(
        u in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| Vec2::new(a, b)), 1..20),
        m in 0.1..5.0f64,
    ) {
        for (a, b) in u.iter().zip(saturate(&u, m)) {
            prop_assert!(b.norm() <= m * (1.0 + 1e-15));
            if a.norm() <= m {
                prop_assert_eq!(*a, b);
            } else {
                prop_assert!(a.cross(b).abs() <= 1e-12 * a.norm() * b.norm());
                prop_assert!(a.dot(b) > 0.0);
            }
        }
    }

    #[test]
    fn jq_control_is_bounded_and_dissipative(
        m in 0.5..4.0f64,
        factor in 1.01..4.0f64,
        v in (-4.0..4.0f64, -4.0..4.0f64),
    ) {
        let params = ModelParams::new(2.0, 1.5, m, 10).unwrap();
        let law = jq_feedback(&params, JqParams::above_bound(&params, factor)).unwrap();
        let v = Vec2::new(v.0, v.1);
        let u = law.control(v);
        prop_assert!(u.norm() <= m * (1.0 + 1e-12));
        prop_assert!(u.dot(v) <= 0.0);
    }

    #[test]
    fn order_parameters_stay_in_unit_interval(x in cloud(6), v in cloud(6), shift in (-50.0..50.0f64, -50.0..50.0f64)) {
        let state = SwarmState::new(0.0, x, v).unwrap();
        let o = order_parameters(&state);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&o.polarization));
        prop_assert!((0.0..=1.0 + 1e-12).contains(&o.ang_momentum));

        // translation leaves every order parameter unchanged
        let moved = SwarmState::new(0.0, state.x.iter().map(|p| *p + Vec2::new(shift.0, shift.1)).collect(), state.v.clone()).unwrap();
        let p = order_parameters(&moved);
        prop_assert!((o.ang_momentum - p.ang_momentum).abs() <= 1e-9);
        prop_assert!((o.mean_radius - p.mean_radius).abs() <= 1e-9 * (1.0 + shift.0.abs() + shift.1.abs()));
    }

    #[test]
    fn overrides_replace_exactly_one_leaf(a in any::<i32>(), b in any::<i32>(), idx in 0usize..3) {
        let mut doc = serde_json::json!({"sim": {"seed": 1}, "list": [1, 2, 3]});
        set_path(&mut doc, "sim.seed", a.into()).unwrap();
        set_path(&mut doc, &format!("list.{idx}"), b.into()).unwrap();
        prop_assert_eq!(doc["sim"]["seed"].as_i64(), Some(a as i64));
        for k in 0..3 {
            let want = if k == idx { b as i64 } else { k as i64 + 1 };
            prop_assert_eq!(doc["list"][k].as_i64(), Some(want));
        }
    }
}
