use glimm_core::riemann::{from_conserved, solve_interior, solve_lateral, WallSide};
use glimm_core::sampler::{Sampler, SamplerKind};
use glimm_core::thermo::{eigenstructure, to_conserved};
use glimm_core::waves::{lax_apply, wave_apply};
use glimm_core::{GasConstants, GasState, ReactionRate};
use proptest::prelude::*;

fn gas() -> GasConstants {
    GasConstants::new(1.4, 1.0, 0.5).unwrap()
}

prop_compose! {
    fn supersonic()(mach in 1.5f64..3.5, angle in -0.25f64..0.25, p in 0.5f64..2.0,
                    rho in 0.5f64..2.0, z in 0.05f64..0.95) -> GasState {
        GasState::from_mach(mach, angle, p, rho, z, &gas())
    }
}

fn close(a: &GasState, b: &GasState, tol: f64) -> bool {
    let (a, b) = (a.as_array(), b.as_array());
    (0..5).all(|i| (a[i] - b[i]).abs() <= tol * (1.0 + b[i].abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn conserved_variables_invert(s in supersonic()) {
        let g = gas();
        let w = to_conserved(&s, &g);
        prop_assert!(w.0[0] > 0.0);
        prop_assert!((w.0[4] / w.0[0] - s.z).abs() < 1e-14);
        let back = from_conserved(&w, &g).unwrap();
        prop_assert!(close(&back, &s, 1e-12));
    }

    #[test]
    fn characteristic_speeds_are_ordered(s in supersonic()) {
        let e = eigenstructure(&s, &gas()).unwrap();
        let slope = s.v / s.u;
        prop_assert_eq!(e.lambda[1], slope);
        prop_assert_eq!(e.lambda[3], slope);
        prop_assert!(e.lambda[0] < slope && slope < e.lambda[4]);
    }

    #[test]
    fn contacts_keep_pressure_and_angle(s in supersonic(), j in 2usize..5, sigma in -0.05f64..0.05) {
        let t = wave_apply(j, sigma, &s, &gas()).unwrap();
        prop_assert!((t.p - s.p).abs() < 1e-14 * s.p);
        prop_assert!((t.flow_angle() - s.flow_angle()).abs() < 1e-14);
    }

    #[test]
    fn interior_fan_reproduces_the_upper_state(
        s in supersonic(),
        d in prop::array::uniform5(-0.04f64..0.04),
    ) {
        let g = gas();
        let above = lax_apply(&d, &s, &g).unwrap();
        let fan = solve_interior(&s, &above, &g).unwrap();
        prop_assert!(close(&lax_apply(&fan.strengths, &s, &g).unwrap(), &above, 1e-10));
        for i in 0..5 {
            prop_assert!((fan.strengths[i] - d[i]).abs() < 1e-8 * (1.0 + d[i].abs()));
        }
        for r in fan.rh_residuals(&g) {
            prop_assert!(r < 1e-10);
        }
    }

    #[test]
    fn lateral_fan_turns_flow_onto_the_wall(
        s in supersonic(),
        turn in -0.08f64..0.08,
        above in any::<bool>(),
    ) {
        let g = gas();
        let wall = s.flow_angle() + turn;
        let side = if above { WallSide::Above } else { WallSide::Below };
        let fan = solve_lateral(&s, wall, side, &g).unwrap();
        let out = if above { fan.above() } else { fan.below() };
        prop_assert!((out.flow_angle() - wall).abs() < 1e-10);
        let moved = fan.strengths.iter().filter(|x| **x != 0.0).count();
        prop_assert!(moved <= 1);
    }

    #[test]
    fn rates_are_nondecreasing(
        t in 0.1f64..5.0, dt in 0.0f64..2.0,
        alpha in 0.0f64..2.0, e in 0.0f64..3.0, slope in 0.0f64..1.0, floor in 0.0f64..1.0,
    ) {
        let g = gas();
        for r in [
            ReactionRate::Arrhenius { alpha, activation: e },
            ReactionRate::AffineFloor { slope, floor },
            ReactionRate::Constant { value: floor },
        ] {
            prop_assert!(r.eval(t, &g) >= 0.0);
            prop_assert!(r.eval(t + dt, &g) >= r.eval(t, &g));
        }
    }

    #[test]
    fn samplers_stay_in_open_interval(seed in any::<u64>(), random in any::<bool>()) {
        let kind = if random { SamplerKind::Random } else { SamplerKind::VanDerCorput };
        let mut a = Sampler::new(kind, seed % (1 << 40));
        let mut b = Sampler::new(kind, seed % (1 << 40));
        for _ in 0..64 {
            let t = a.next_theta();
            prop_assert!(t > -1.0 && t < 1.0);
            prop_assert_eq!(t, b.next_theta());
        }
    }
}
