//! Exact reaction substep.
//!
//! With `x` frozen inside a strip, the reaction update keeps the first
//! three conserved components, adds `q rho Z phi(T) tau` to the energy
//! flux and removes `rho Z phi(T) tau` from the species flux. The state is
//! then recovered on the supersonic branch of the density quadratic.

use crate::error::{GlimmError, Result};
use crate::riemann::from_conserved;
use crate::thermo::{temperature, to_conserved, Conserved, GasConstants, GasState, ReactionRate};
use crate::waves::clamp_fraction;

/// Applies one reaction step of length `tau` to `state`.
pub fn react_state(
    state: &GasState,
    tau: f64,
    gas: &GasConstants,
    rate: &ReactionRate,
) -> Result<GasState> {
    if state.z == 0.0 || tau == 0.0 {
        return Ok(*state);
    }
    let phi = rate.eval(temperature(state, gas), gas);
    if phi == 0.0 {
        return Ok(*state);
    }
    let m = state.rho * state.u;
    let burnt = m * state.z * phi * tau / state.u;
    if gas.q_heat == 0.0 {
        // Gas part untouched; only the species flux changes.
        let z = clamp_fraction(state.z - burnt / m)?;
        return Ok(GasState { z, ..*state });
    }
    let mut w = to_conserved(state, gas).0;
    w[3] += gas.q_heat * burnt;
    w[4] -= burnt;
    if w[4] < -1e-12 * m {
        return Err(GlimmError::MassFraction(w[4] / m));
    }
    match from_conserved(&Conserved(w), gas) {
        Ok(s) => Ok(s),
        Err(GlimmError::Subsonic { u, c }) => Err(GlimmError::ThermalChoking(format!(
            "heat release drove the state subsonic (u = {u}, c = {c})"
        ))),
        Err(GlimmError::ThermalChoking(_)) => Err(GlimmError::ThermalChoking(format!(
            "no supersonic state after releasing {} into {:?}",
            gas.q_heat * burnt,
            state
        ))),
        Err(e) => Err(e),
    }
}

/// Lower bound `min phi(T)/u` over states with `T >= t_min` and
/// `u <= u_max`; the decay rate of the mass fraction.
pub fn decay_rate(rate: &ReactionRate, t_min: f64, u_max: f64, gas: &GasConstants) -> f64 {
    rate.min_from(t_min, gas) / u_max
}

/// `|Z_0|_inf exp(-Phi_1 x)`.
pub fn z_envelope(z0_max: f64, decay: f64, x: f64) -> f64 {
    z0_max * (-decay * x).exp()
}

#[cfg(test)]
mod test {
    use super::*;
    use proptest::prelude::*;

    fn gas(q: f64) -> GasConstants {
        GasConstants::new(1.4, 1.0, q).unwrap()
    }

    #[test]
    fn inert_mass_fraction_decays_linearly() {
        let g = gas(0.0);
        let s = GasState::new(2.0, 0.0, 1.0, 1.4, 0.5);
        let r = react_state(&s, 1.0, &g, &ReactionRate::Constant { value: 0.01 }).unwrap();
        assert!((r.z - 0.4975).abs() < 1e-15);
        assert_eq!((r.u, r.v, r.p, r.rho), (s.u, s.v, s.p, s.rho));
    }

    #[test]
    fn zero_step_is_identity() {
        let g = gas(1.0);
        let s = GasState::new(2.0, 0.1, 1.0, 1.4, 0.5);
        let rate = ReactionRate::Constant { value: 2.0 };
        assert_eq!(react_state(&s, 0.0, &g, &rate).unwrap(), s);
        // Continuity of the selected root as tau -> 0.
        let r = react_state(&s, 1e-12, &g, &rate).unwrap();
        assert!((r.rho - s.rho).abs() < 1e-10);
    }

    #[test]
    fn choking_is_reported() {
        let g = gas(50.0);
        let s = GasState::new(1.3, 0.0, 1.0, 1.4, 1.0);
        let e = react_state(&s, 1.0, &g, &ReactionRate::Constant { value: 1.0 }).unwrap_err();
        assert!(matches!(e, GlimmError::ThermalChoking(_)), "{e}");
    }

    #[test]
    fn heat_release_matches_density_quadratic() {
        // Reference: the closed-form root in terms of the pre-state.
        let g = gas(0.8);
        let s = GasState::new(2.2, 0.1, 1.0, 1.3, 0.4);
        let phi = 0.3;
        let tau = 0.05;
        let r = react_state(&s, tau, &g, &ReactionRate::Constant { value: phi }).unwrap();
        let gm = g.gamma;
        let m = s.rho * s.u;
        let pm = m * s.u + s.p;
        let c = 0.5 * (gm - 1.0) * s.u * s.u
            + gm * s.p / s.rho
            + (gm - 1.0) * g.q_heat * s.z * phi * tau / s.u;
        let a = 0.5 * (gm + 1.0) * m * m;
        let x = (gm * pm + ((gm * pm).powi(2) - 4.0 * a * c).sqrt()) / (2.0 * a);
        assert!((r.rho - 1.0 / x).abs() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]
        #[test]
        fn invariants_hold(
            mach in 1.6f64..3.0, angle in -0.2f64..0.2, p in 0.5f64..2.0, rho in 0.5f64..2.0,
            z in 0.0f64..1.0, q in 0.0f64..1.0, phi in 0.0f64..1.0, tau in 0.0f64..0.05,
        ) {
            let g = gas(q);
            let s = GasState::from_mach(mach, angle, p, rho, z, &g);
            let r = react_state(&s, tau, &g, &ReactionRate::Constant { value: phi }).unwrap();
            let (w0, w1) = (to_conserved(&s, &g).0, to_conserved(&r, &g).0);
            for i in 0..3 {
                prop_assert!((w1[i] - w0[i]).abs() <= 1e-14 * w0[i].abs().max(w0[0]));
            }
            prop_assert!((g.q_heat * (w1[4] - w0[4]) + (w1[3] - w0[3])).abs() <= 1e-14 * w0[3].abs());
            prop_assert!(temperature(&r, &g) >= temperature(&s, &g) * (1.0 - 1e-15));
            prop_assert!(r.z <= s.z);
        }
    }
}
