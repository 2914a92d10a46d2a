//! Riemann solvers: interior, lateral (wall), and the strong 1-shock
//! problem, plus conserved-to-primitive inversion and the oblique shock
//! polar.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{GlimmError, Result};
use crate::thermo::{
    acoustic_speed, eigenstructure, sonic_speed, to_conserved, Conserved, GasConstants, GasState,
};
use crate::waves::{
    acoustic_apply, brent, clamp_fraction, contact_apply, lax_states, rarefaction_apply,
    rarefaction_to_angle, rh_residual, shock_polar_state, Strengths, WaveGeometry, WaveKind,
    NEGLIGIBLE,
};

/// Maximum Newton iterations for the interior and strong solvers.
pub const MAX_NEWTON: usize = 50;
/// Scaled residual accepted by the Newton solvers.
pub const NEWTON_TOL: f64 = 1e-13;

/// Inverts `W(U)` on the supersonic branch.
pub fn from_conserved(w: &Conserved, gas: &GasConstants) -> Result<GasState> {
    let [m, pm, w3, w4, w5] = w.0;
    let g = gas.gamma;
    if !(m > 0.0) || !w.0.iter().all(|x| x.is_finite()) {
        return Err(GlimmError::InvalidState(format!(
            "mass flux must be positive: {:?}",
            w.0
        )));
    }
    let v = w3 / m;
    let c = (g - 1.0) * (w4 / m - 0.5 * v * v);
    let disc = g * g * pm * pm - 2.0 * (g + 1.0) * m * m * c;
    if disc < 0.0 {
        return Err(GlimmError::ThermalChoking(format!(
            "no real state for conserved vector {:?}",
            w.0
        )));
    }
    let tau = (g * pm + disc.sqrt()) / ((g + 1.0) * m * m);
    let u = m * tau;
    let p = pm - m * u;
    let s = GasState::new(u, v, p, 1.0 / tau, clamp_fraction(w5 / m)?);
    s.validate()?;
    let cs = sonic_speed(&s, gas);
    if u <= cs {
        return Err(GlimmError::Subsonic { u, c: cs });
    }
    Ok(s)
}

/// Side of the fluid on which a wall lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WallSide {
    /// Fluid below the wall; the reflected wave is of family 1.
    Above,
    /// Fluid above the wall; the reflected wave is of family 5.
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiemannInput {
    Interior {
        below: GasState,
        above: GasState,
    },
    Lateral {
        state: GasState,
        wall_angle: f64,
        side: WallSide,
    },
    Strong {
        below: GasState,
        above: GasState,
        slope_guess: f64,
    },
}

/// Solution of a Riemann problem: five waves separating six constant
/// states, family 1 lowest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveFan {
    pub strengths: Strengths,
    pub states: [GasState; 6],
    /// Waves with non-negligible strength, ordered from below.
    pub waves: Vec<WaveGeometry>,
    /// Slope of a strong 1-shock that replaces the family 1 wave. Its
    /// strength is not part of `strengths`.
    pub strong: Option<f64>,
}

impl WaveFan {
    pub fn trivial(s: GasState) -> Self {
        WaveFan {
            strengths: [0.0; 5],
            states: [s; 6],
            waves: Vec::new(),
            strong: None,
        }
    }

    pub fn below(&self) -> &GasState {
        &self.states[0]
    }

    pub fn above(&self) -> &GasState {
        &self.states[5]
    }

    pub fn is_trivial(&self) -> bool {
        self.waves.is_empty()
    }

    /// Largest `|slope|` of any wave.
    pub fn max_speed(&self) -> f64 {
        self.waves
            .iter()
            .map(|w| w.slope_lo.abs().max(w.slope_hi.abs()))
            .fold(0.0, f64::max)
    }

    /// State on the ray `y = xi x` from the fan origin.
    pub fn sample(&self, xi: f64, gas: &GasConstants) -> Result<GasState> {
        for w in &self.waves {
            let before = &self.states[w.family - 1];
            if xi < w.slope_lo {
                return Ok(*before);
            }
            if w.kind == WaveKind::Rarefaction && xi < w.slope_hi {
                return rarefaction_apply(w.family, xi - w.slope_lo, before, gas);
            }
        }
        Ok(*self.above())
    }

    /// Scaled Rankine-Hugoniot residual of each shock, bottom to top,
    /// the strong shock first.
    pub fn rh_residuals(&self, gas: &GasConstants) -> Vec<f64> {
        let mut out = Vec::new();
        if let Some(s) = self.strong {
            out.push(rh_residual(&self.states[0], &self.states[1], s, gas));
        }
        for (i, w) in self.waves.iter().enumerate() {
            if w.kind == WaveKind::Shock {
                let (a, b) = self.sides(i);
                out.push(rh_residual(a, b, w.slope_lo, gas));
            }
        }
        out
    }

    /// States at the lower and upper edge of the wave at index `i` of
    /// `waves`.
    pub fn sides(&self, i: usize) -> (&GasState, &GasState) {
        let f = self.waves[i].family;
        (&self.states[f - 1], &self.states[f])
    }
}

fn fan_from_strengths(
    sigma: Strengths,
    below: &GasState,
    above: &GasState,
    gas: &GasConstants,
) -> Result<WaveFan> {
    let mut states = lax_states(&sigma, below, gas)?;
    states[5] = *above;
    let mut waves = Vec::with_capacity(5);
    for j in 1..=5 {
        let sj = sigma[j - 1];
        if sj.abs() <= NEGLIGIBLE {
            continue;
        }
        if j == 1 || j == 5 {
            let (_, geom) = acoustic_apply(j, sj, &states[j - 1], gas)?;
            waves.push(geom);
        } else {
            let m = &states[j - 1];
            let slope = m.v / m.u;
            waves.push(WaveGeometry {
                family: j,
                kind: WaveKind::Contact,
                strength: sj,
                slope_lo: slope,
                slope_hi: slope,
            });
        }
    }
    Ok(WaveFan {
        strengths: sigma,
        states,
        waves,
        strong: None,
    })
}

/// Reference magnitudes for the gas components of `W`.
fn w_scale(s: &GasState, gas: &GasConstants) -> [f64; 4] {
    let w = to_conserved(s, gas).0;
    let mom = w[1].abs();
    [w[0].abs(), mom, mom, w[3].abs()]
}

fn gas_residual(
    st: &GasState,
    target: &[f64; 5],
    scale: &[f64; 4],
    gas: &GasConstants,
) -> Vector4<f64> {
    let w = to_conserved(st, gas).0;
    Vector4::new(
        (w[0] - target[0]) / scale[0],
        (w[1] - target[1]) / scale[1],
        (w[2] - target[2]) / scale[2],
        (w[3] - target[3]) / scale[3],
    )
}

/// Damped Newton iteration with a forward-difference Jacobian.
fn newton4<F>(
    solver: &'static str,
    mut x: Vector4<f64>,
    steps: [f64; 4],
    f: F,
) -> Result<Vector4<f64>>
where
    F: Fn(&Vector4<f64>) -> Result<Vector4<f64>>,
{
    let mut fx = f(&x)?;
    let mut norm = fx.amax();
    // Full steps taken past the tolerance, down to the round-off floor.
    let mut polish = 0;
    for it in 0..MAX_NEWTON {
        if norm < NEWTON_TOL {
            if polish == 2 || norm == 0.0 {
                return Ok(x);
            }
            polish += 1;
        }
        let mut jac = Matrix4::zeros();
        for k in 0..4 {
            let h = steps[k] * (1.0 + x[k].abs());
            let mut xp = x;
            xp[k] += h;
            let col = match f(&xp) {
                Ok(fp) => (fp - fx) / h,
                Err(_) => {
                    xp[k] = x[k] - h;
                    (fx - f(&xp)?) / h
                }
            };
            jac.set_column(k, &col);
        }
        let dx = match jac.lu().solve(&(-fx)) {
            Some(d) => d,
            None => {
                return Err(GlimmError::NonConvergence {
                    solver,
                    iterations: it,
                    residual: norm,
                })
            }
        };
        if polish > 0 {
            match f(&(x + dx)) {
                Ok(ft) if ft.amax() < norm => {
                    x += dx;
                    norm = ft.amax();
                    fx = ft;
                    continue;
                }
                _ => return Ok(x),
            }
        }
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let xt = x + dx * alpha;
            if let Ok(ft) = f(&xt) {
                let nt = ft.amax();
                if nt < norm || nt < NEWTON_TOL {
                    x = xt;
                    fx = ft;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            // Residual at the round-off floor.
            if norm < 1e-11 {
                return Ok(x);
            }
            return Err(GlimmError::NonConvergence {
                solver,
                iterations: it,
                residual: norm,
            });
        }
    }
    if norm < 1e-11 {
        return Ok(x);
    }
    Err(GlimmError::NonConvergence {
        solver,
        iterations: MAX_NEWTON,
        residual: norm,
    })
}

/// Gas part of `Phi(sigma; U)` with the family 4 wave omitted.
fn gas_path(x: &Vector4<f64>, below: &GasState, gas: &GasConstants) -> Result<GasState> {
    let s = acoustic_apply(1, x[0], below, gas)?.0;
    let s = contact_apply(2, x[1], &s)?;
    let s = contact_apply(3, x[2], &s)?;
    Ok(acoustic_apply(5, x[3], &s, gas)?.0)
}

/// Strength of the family 4 contact placed on `mid` that carries `Z`
/// from `z_below` to `z_above`.
fn z_strength(mid: &GasState, z_below: f64, z_above: f64) -> f64 {
    (z_above - z_below) * mid.rho * mid.u
}

/// Solves `Phi(sigma; below) = above`.
pub fn solve_interior(below: &GasState, above: &GasState, gas: &GasConstants) -> Result<WaveFan> {
    below.validate_supersonic(gas)?;
    above.validate_supersonic(gas)?;
    if below == above {
        return Ok(WaveFan::trivial(*below));
    }
    let target = to_conserved(above, gas).0;
    let scale = w_scale(above, gas);

    // Initial guess from the eigen-decomposition at the mean state.
    let mid = GasState::new(
        0.5 * (below.u + above.u),
        0.5 * (below.v + above.v),
        0.5 * (below.p + above.p),
        0.5 * (below.rho + above.rho),
        0.0,
    );
    let e = eigenstructure(&mid, gas)?;
    let mut r = Matrix4::zeros();
    for (col, fam) in [0usize, 1, 2, 4].iter().enumerate() {
        for i in 0..4 {
            r[(i, col)] = e.r[*fam][i];
        }
    }
    let du = Vector4::new(
        above.u - below.u,
        above.v - below.v,
        above.p - below.p,
        above.rho - below.rho,
    );
    let x0 = r.lu().solve(&du).unwrap_or_else(Vector4::zeros);

    let solve_for = |x0: Vector4<f64>, target: &[f64; 5]| {
        newton4("interior Riemann solver", x0, [1e-7; 4], |x| {
            Ok(gas_residual(&gas_path(x, below, gas)?, target, &scale, gas))
        })
    };
    let x = match solve_for(x0, &target) {
        Ok(x) => x,
        Err(e @ GlimmError::NonConvergence { .. }) => {
            // Continuation along the segment from W(below) to W(above).
            let start = to_conserved(below, gas).0;
            let steps = 16;
            let mut x = Vector4::zeros();
            for i in 1..=steps {
                let t = i as f64 / steps as f64;
                let mid: [f64; 5] = std::array::from_fn(|c| start[c] + t * (target[c] - start[c]));
                x = solve_for(x, &mid).map_err(|_| e.clone())?;
            }
            x
        }
        Err(e) => return Err(e),
    };
    let m3 = {
        let s = acoustic_apply(1, x[0], below, gas)?.0;
        let s = contact_apply(2, x[1], &s)?;
        contact_apply(3, x[2], &s)?
    };
    let sigma = [x[0], x[1], x[2], z_strength(&m3, below.z, above.z), x[3]];
    fan_from_strengths(sigma, below, above, gas)
}

/// Reflects a state across the x axis.
fn mirror(s: &GasState) -> GasState {
    GasState { v: -s.v, ..*s }
}

/// Single reflected wave that turns `state` parallel to a wall with
/// direction angle `wall_angle`.
pub fn solve_lateral(
    state: &GasState,
    wall_angle: f64,
    side: WallSide,
    gas: &GasConstants,
) -> Result<WaveFan> {
    state.validate_supersonic(gas)?;
    match side {
        WallSide::Above => lateral_above(state, wall_angle, gas),
        WallSide::Below => {
            let f = lateral_above(&mirror(state), -wall_angle, gas)?;
            let wall = mirror(f.above());
            let mut states = [wall; 6];
            states[5] = *state;
            let sigma = f.strengths[0];
            let waves = f
                .waves
                .iter()
                .map(|w| WaveGeometry {
                    family: 5,
                    kind: w.kind,
                    strength: sigma,
                    slope_lo: -w.slope_hi,
                    slope_hi: -w.slope_lo,
                })
                .collect();
            Ok(WaveFan {
                strengths: [0.0, 0.0, 0.0, 0.0, sigma],
                states,
                waves,
                strong: None,
            })
        }
    }
}

fn lateral_above(state: &GasState, wall_angle: f64, gas: &GasConstants) -> Result<WaveFan> {
    let turn = state.flow_angle() - wall_angle;
    if turn == 0.0 {
        return Ok(WaveFan::trivial(*state));
    }
    // Below this turning the shock and expansion curves agree to round-off
    // and the polar root bracket degenerates.
    let (post, geom) = if turn > 1e-9 {
        let (post, s) = oblique_shock_polar(state, turn, gas)?;
        let sigma = acoustic_speed(1, &post, gas) - acoustic_speed(1, state, gas);
        (
            post,
            WaveGeometry {
                family: 1,
                kind: WaveKind::Shock,
                strength: sigma,
                slope_lo: s,
                slope_hi: s,
            },
        )
    } else {
        let mut post = rarefaction_to_angle(1, wall_angle, state, gas)?;
        // Slip condition holds exactly.
        let q = post.speed();
        post.u = q * wall_angle.cos();
        post.v = q * wall_angle.sin();
        let lo = acoustic_speed(1, state, gas);
        let hi = acoustic_speed(1, &post, gas);
        let geom = if hi >= lo {
            WaveGeometry {
                family: 1,
                kind: WaveKind::Rarefaction,
                strength: hi - lo,
                slope_lo: lo,
                slope_hi: hi,
            }
        } else {
            let mid = 0.5 * (lo + hi);
            WaveGeometry {
                family: 1,
                kind: WaveKind::Shock,
                strength: hi - lo,
                slope_lo: mid,
                slope_hi: mid,
            }
        };
        (post, geom)
    };
    let mut states = [post; 6];
    states[0] = *state;
    let waves = if geom.strength.abs() > NEGLIGIBLE {
        vec![geom]
    } else {
        Vec::new()
    };
    Ok(WaveFan {
        strengths: [geom.strength, 0.0, 0.0, 0.0, 0.0],
        states,
        waves,
        strong: None,
    })
}

/// Solves `Psi(alpha_5, alpha_4, alpha_3, alpha_2, 0; D(s, below)) = above`
/// for a strong 1-shock of slope `s` followed by weak waves of families
/// 2 to 5.
pub fn solve_strong(
    below: &GasState,
    above: &GasState,
    slope_guess: f64,
    gas: &GasConstants,
) -> Result<WaveFan> {
    below.validate_supersonic(gas)?;
    above.validate_supersonic(gas)?;
    let target = to_conserved(above, gas).0;
    let scale = w_scale(above, gas);
    let path = |x: &Vector4<f64>| -> Result<GasState> {
        let s = shock_polar_state(x[0], below, gas)?;
        let s = contact_apply(2, x[1], &s)?;
        let s = contact_apply(3, x[2], &s)?;
        Ok(acoustic_apply(5, x[3], &s, gas)?.0)
    };
    let x0 = Vector4::new(slope_guess, 0.0, 0.0, 0.0);
    let x = newton4("strong-shock Riemann solver", x0, [1e-7; 4], |x| {
        Ok(gas_residual(&path(x)?, &target, &scale, gas))
    })?;
    let s = x[0];
    let post = shock_polar_state(s, below, gas)?;
    post.validate_supersonic(gas)?;
    let m3 = contact_apply(3, x[2], &contact_apply(2, x[1], &post)?)?;
    let alpha = [0.0, x[1], x[2], z_strength(&m3, below.z, above.z), x[3]];
    let mut states = [*below; 6];
    states[1] = post;
    for j in 2..=5 {
        states[j] = if j == 5 {
            acoustic_apply(5, alpha[4], &states[4], gas)?.0
        } else {
            contact_apply(j, alpha[j - 1], &states[j - 1])?
        };
    }
    states[5] = *above;
    let mut waves = vec![WaveGeometry {
        family: 1,
        kind: WaveKind::Shock,
        strength: acoustic_speed(1, &post, gas) - acoustic_speed(1, below, gas),
        slope_lo: s,
        slope_hi: s,
    }];
    for j in 2..=5 {
        let a = alpha[j - 1];
        if a.abs() <= NEGLIGIBLE {
            continue;
        }
        if j == 5 {
            waves.push(acoustic_apply(5, a, &states[4], gas)?.1);
        } else {
            let m = &states[j - 1];
            waves.push(WaveGeometry {
                family: j,
                kind: WaveKind::Contact,
                strength: a,
                slope_lo: m.v / m.u,
                slope_hi: m.v / m.u,
            });
        }
    }
    Ok(WaveFan {
        strengths: alpha,
        states,
        waves,
        strong: Some(s),
    })
}

pub fn solve(input: &RiemannInput, gas: &GasConstants) -> Result<WaveFan> {
    match *input {
        RiemannInput::Interior { below, above } => solve_interior(&below, &above, gas),
        RiemannInput::Lateral {
            state,
            wall_angle,
            side,
        } => solve_lateral(&state, wall_angle, side, gas),
        RiemannInput::Strong {
            below,
            above,
            slope_guess,
        } => solve_strong(&below, &above, slope_guess, gas),
    }
}

/// Clockwise turning produced by the 1-shock of inclination `phi`.
fn polar_deflection(phi: f64, up: &GasState, gas: &GasConstants) -> Option<f64> {
    shock_polar_state(phi.tan(), up, gas)
        .ok()
        .map(|s| up.flow_angle() - s.flow_angle())
}

fn polar_range(up: &GasState, gas: &GasConstants) -> (f64, f64) {
    let theta = up.flow_angle();
    let mu = (1.0 / up.mach(gas)).asin();
    // Shocks are graphs y = s x, so the inclination stays above -pi/2.
    let lo = (theta - 0.5 * std::f64::consts::PI).max(-0.5 * std::f64::consts::PI);
    (lo + 1e-9, theta - mu)
}

/// Inclination of the detachment shock and the critical deflection.
fn detachment(up: &GasState, gas: &GasConstants) -> (f64, f64) {
    let (mut a, mut b) = polar_range(up, gas);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let d = |phi: f64| polar_deflection(phi, up, gas).unwrap_or(f64::NEG_INFINITY);
    let mut c = b - ratio * (b - a);
    let mut e = a + ratio * (b - a);
    let (mut fc, mut fe) = (d(c), d(e));
    while (b - a).abs() > 1e-13 {
        if fc > fe {
            b = e;
            e = c;
            fe = fc;
            c = b - ratio * (b - a);
            fc = d(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + ratio * (b - a);
            fe = d(e);
        }
    }
    let phi = 0.5 * (a + b);
    (phi, d(phi))
}

/// Largest clockwise turning an attached 1-shock can produce.
pub fn critical_deflection(up: &GasState, gas: &GasConstants) -> f64 {
    detachment(up, gas).1
}

/// Weak-branch oblique 1-shock turning `up` clockwise by `deflection`.
/// Returns the post state and the shock slope.
pub fn oblique_shock_polar(
    up: &GasState,
    deflection: f64,
    gas: &GasConstants,
) -> Result<(GasState, f64)> {
    up.validate_supersonic(gas)?;
    if deflection == 0.0 {
        return Ok((*up, acoustic_speed(1, up, gas)));
    }
    let (phi_c, crit) = detachment(up, gas);
    if !(deflection > 0.0 && deflection < crit) {
        return Err(GlimmError::Detached {
            deflection,
            critical: crit,
        });
    }
    let (_, phi_mach) = polar_range(up, gas);
    let phi = brent(phi_c, phi_mach, |phi| {
        polar_deflection(phi, up, gas).unwrap_or(f64::NAN) - deflection
    })
    .ok_or(GlimmError::NonConvergence {
        solver: "oblique shock polar",
        iterations: 400,
        residual: f64::NAN,
    })?;
    let s = phi.tan();
    let mut post = shock_polar_state(s, up, gas)?;
    let q = post.speed();
    let angle = up.flow_angle() - deflection;
    post.u = q * angle.cos();
    post.v = q * angle.sin();
    let c = sonic_speed(&post, gas);
    if post.u <= c {
        return Err(GlimmError::Subsonic { u: post.u, c });
    }
    Ok((post, s))
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::waves::lax_apply;

    fn gas() -> GasConstants {
        GasConstants::new(1.4, 1.0, 0.0).unwrap()
    }

    fn base() -> GasState {
        GasState::new(2.0, 0.0, 1.0, 1.4, 0.0)
    }

    #[test]
    fn conserved_round_trip() {
        let g = gas();
        let s = GasState::new(2.3, -0.2, 0.9, 1.1, 0.37);
        let back = from_conserved(&to_conserved(&s, &g), &g).unwrap();
        for (a, b) in s.as_array().iter().zip(back.as_array()) {
            assert!((a - b).abs() < 1e-14 * a.abs().max(1.0));
        }
    }

    #[test]
    fn equal_states_give_zero_fan() {
        let f = solve_interior(&base(), &base(), &gas()).unwrap();
        assert_eq!(f.strengths, [0.0; 5]);
        assert!(f.is_trivial());
    }

    #[test]
    fn recovers_strengths() {
        let g = gas();
        let sigma = [-0.03, 0.01, -0.02, 0.05, 0.04];
        let b = GasState::new(2.0, 0.0, 1.0, 1.4, 0.1);
        let a = lax_apply(&sigma, &b, &g).unwrap();
        let f = solve_interior(&b, &a, &g).unwrap();
        for i in 0..5 {
            assert!(
                (f.strengths[i] - sigma[i]).abs() < 1e-10,
                "{i}: {:?}",
                f.strengths
            );
        }
    }

    #[test]
    fn fan_sampling_is_monotone_in_space() {
        let g = gas();
        let b = base();
        let a = lax_apply(&[0.04, 0.0, 0.01, 0.0, -0.03], &b, &g).unwrap();
        let f = solve_interior(&b, &a, &g).unwrap();
        assert_eq!(f.sample(-10.0, &g).unwrap(), b);
        assert_eq!(f.sample(10.0, &g).unwrap(), a);
        let w = f.waves[0];
        let mid = f.sample(0.5 * (w.slope_lo + w.slope_hi), &g).unwrap();
        assert!(mid.p < b.p && mid.p > f.states[1].p);
    }

    #[test]
    fn oblique_shock_mach_two_ten_degrees() {
        // theta-beta-M relation, weak branch.
        let g = gas();
        let (post, s) = oblique_shock_polar(&base(), 10f64.to_radians(), &g).unwrap();
        let beta = -s.atan();
        assert!(
            (beta.to_degrees() - 39.3139).abs() < 1e-3,
            "beta {}",
            beta.to_degrees()
        );
        assert!((post.flow_angle() + 10f64.to_radians()).abs() < 1e-14);
        assert!(rh_residual(&post, &base(), s, &g) < 1e-12);
    }

    #[test]
    fn detachment_is_reported() {
        let g = gas();
        let crit = critical_deflection(&base(), &g);
        assert!(
            (crit.to_degrees() - 22.97).abs() < 0.05,
            "{}",
            crit.to_degrees()
        );
        assert!(matches!(
            oblique_shock_polar(&base(), crit + 1e-3, &g),
            Err(GlimmError::Detached { .. })
        ));
    }

    #[test]
    fn lateral_compression_and_expansion() {
        let g = gas();
        let d = 5f64.to_radians();
        let f = solve_lateral(&base(), -d, WallSide::Above, &g).unwrap();
        assert!(f.strengths[0] < 0.0);
        assert!((f.above().flow_angle() + d).abs() < 1e-14);
        let f = solve_lateral(&base(), d, WallSide::Above, &g).unwrap();
        assert!(f.strengths[0] > 0.0);
        assert!((f.above().flow_angle() - d).abs() < 1e-14);
        // Wall below the fluid turning into the flow: compressive 5-wave.
        let f = solve_lateral(&base(), d, WallSide::Below, &g).unwrap();
        assert!(f.strengths[4] < 0.0);
        assert!((f.below().flow_angle() - d).abs() < 1e-14);
        assert_eq!(*f.above(), base());
    }

    #[test]
    fn strong_problem_recovers_weak_waves() {
        let g = gas();
        let up = GasState::from_mach(2.0, 10f64.to_radians(), 1.0, 1.4, 0.0, &g);
        let (post, s) = oblique_shock_polar(&up, 10f64.to_radians(), &g).unwrap();
        let alpha = [0.0, 0.01, -0.02, 0.0, 0.015];
        let above = lax_apply(&alpha, &post, &g).unwrap();
        let f = solve_strong(&up, &above, s + 0.01, &g).unwrap();
        assert!((f.strong.unwrap() - s).abs() < 1e-10);
        for i in 1..5 {
            assert!((f.strengths[i] - alpha[i]).abs() < 1e-10);
        }
    }
}
