//! Single-shot modes: one Riemann problem, one reaction step, or the
//! interaction survey.

use serde::Serialize;

use crate::config::{Mode, ProbeKind, RunConfig, SurveyConfig};
use crate::diagnostics::survey::{survey, SurveyReport};
use crate::error::{GlimmError, Result};
use crate::reaction::react_state;
use crate::riemann::{
    oblique_shock_polar, solve_interior, solve_lateral, solve_strong, WallSide, WaveFan,
};
use crate::thermo::{temperature, to_conserved, GasConstants, GasState};
use crate::waves::wave_apply;

#[derive(Debug, Clone, Serialize)]
pub struct FanReport {
    pub fan: WaveFan,
    /// Scaled Rankine-Hugoniot residual of each shock, bottom to top.
    pub rh_residuals: Vec<f64>,
    /// Largest gap between consecutive fan states and the wave curves
    /// through them.
    pub closure_residual: f64,
}

impl FanReport {
    pub fn new(fan: WaveFan, gas: &GasConstants) -> Result<Self> {
        let rh = fan.rh_residuals(gas);
        let first = if fan.strong.is_some() { 1 } else { 0 };
        let mut closure: f64 = 0.0;
        for i in first..5 {
            let got = wave_apply(i + 1, fan.strengths[i], &fan.states[i], gas)?.as_array();
            let want = fan.states[i + 1].as_array();
            for c in 0..5 {
                closure = closure.max((got[c] - want[c]).abs());
            }
        }
        Ok(FanReport {
            fan,
            rh_residuals: rh,
            closure_residual: closure,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReactOutcome {
    pub before: GasState,
    pub after: GasState,
    pub tau: f64,
    pub t_before: f64,
    pub t_after: f64,
    /// Relative change of the first three conserved components.
    pub invariant_residual: f64,
    /// `q dw5 + dw4`, relative to `|w4|`.
    pub energy_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ProbeOutcome {
    Riemann(FanReport),
    React(ReactOutcome),
    Survey(SurveyReport),
}

/// Runs the probe or survey selected by `cfg.mode`.
pub fn execute(cfg: &RunConfig) -> Result<ProbeOutcome> {
    let gas = &cfg.gas;
    match cfg.mode {
        Mode::RiemannProbe => {
            let p = cfg
                .probe
                .as_ref()
                .ok_or_else(|| GlimmError::config("probe", "required for riemann-probe"))?;
            let above = p.above.unwrap_or(p.below);
            let fan = match p.kind {
                ProbeKind::Interior => solve_interior(&p.below, &above, gas)?,
                ProbeKind::Lateral => solve_lateral(
                    &p.below,
                    p.wall_angle_deg.to_radians(),
                    p.side.unwrap_or(WallSide::Above),
                    gas,
                )?,
                ProbeKind::Strong => {
                    let guess = match p.slope_guess {
                        Some(s) => s,
                        None => {
                            oblique_shock_polar(
                                &p.below,
                                p.below.flow_angle() - above.flow_angle(),
                                gas,
                            )?
                            .1
                        }
                    };
                    solve_strong(&p.below, &above, guess, gas)?
                }
            };
            Ok(ProbeOutcome::Riemann(FanReport::new(fan, gas)?))
        }
        Mode::ReactProbe => {
            let p = cfg
                .react_probe
                .as_ref()
                .ok_or_else(|| GlimmError::config("react_probe", "required for react-probe"))?;
            let after = react_state(&p.state, p.tau, gas, &cfg.reaction)?;
            let (w0, w1) = (to_conserved(&p.state, gas).0, to_conserved(&after, gas).0);
            let invariant_residual = (0..3)
                .map(|i| ((w1[i] - w0[i]) / w0[i].abs().max(1e-300)).abs())
                .fold(0.0, f64::max);
            let energy_residual =
                (gas.q_heat * (w1[4] - w0[4]) + (w1[3] - w0[3])).abs() / w0[3].abs();
            Ok(ProbeOutcome::React(ReactOutcome {
                before: p.state,
                after,
                tau: p.tau,
                t_before: temperature(&p.state, gas),
                t_after: temperature(&after, gas),
                invariant_residual,
                energy_residual,
            }))
        }
        Mode::Survey => {
            let init = cfg
                .initial
                .as_ref()
                .ok_or_else(|| GlimmError::config("initial", "required for survey"))?;
            let s = cfg.survey.clone().unwrap_or_default();
            let SurveyConfig {
                samples,
                radius,
                deflection_deg,
            } = s;
            let base = init.far_field.state(gas);
            Ok(ProbeOutcome::Survey(survey(
                &base,
                radius,
                samples,
                cfg.seed,
                deflection_deg.to_radians(),
                gas,
            )?))
        }
        _ => Err(GlimmError::config("mode", "not a probe mode")),
    }
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn lateral_probe_turns_flow_along_wall() {
        let cfg = parse_config(
            r#"
mode = "riemann-probe"
[probe]
kind = "lateral"
wall_angle_deg = 5.0
below = { u = 2.366, v = 0.0, p = 1.0, rho = 1.4, z = 0.0 }
"#,
        )
        .unwrap();
        let ProbeOutcome::Riemann(f) = execute(&cfg).unwrap() else {
            panic!()
        };
        assert!((f.fan.above().flow_angle() - 5f64.to_radians()).abs() < 1e-10);
        assert!(f.fan.strengths[0] > 0.0);
        assert!(f.closure_residual < 1e-12);
    }

    #[test]
    fn react_probe_burns_fuel() {
        let cfg = parse_config(
            r#"
mode = "react-probe"
[reaction]
kind = "constant"
value = 1.0
[react_probe]
tau = 0.1
state = { u = 2.366, v = 0.0, p = 1.0, rho = 1.4, z = 0.5 }
"#,
        )
        .unwrap();
        let ProbeOutcome::React(r) = execute(&cfg).unwrap() else {
            panic!()
        };
        assert!(r.after.z < 0.5);
        assert!(r.invariant_residual < 1e-14 && r.energy_residual < 1e-14);
    }
}
