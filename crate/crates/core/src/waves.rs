//! Elementary wave curves and their composition.
//!
//! Acoustic curves (families 1 and 5) are parameterized by the change of
//! the characteristic speed: `sigma = lambda_j(U) - lambda_j(U_0)`.
//! Negative `sigma` selects the admissible shock, positive `sigma` the
//! rarefaction. Contacts use the exponential charts `C_2`, `C_3` and the
//! mass-flux chart `C_4`.

use roots::{find_root_brent, Convergency};
use serde::{Deserialize, Serialize};

use crate::error::{GlimmError, Result};
use crate::thermo::{
    acoustic_eigenvector, acoustic_speed, flux_h, sonic_speed, to_conserved, GasConstants, GasState,
};

/// Strengths of the five elementary waves, family 1 first.
pub type Strengths = [f64; 5];

/// Strengths below this are treated as absent when building fans.
pub const NEGLIGIBLE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Contact,
}

/// Location of one wave inside a fan, as slopes `dy/dx` from the fan
/// origin. Shocks and contacts have `slope_lo == slope_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveGeometry {
    pub family: usize,
    pub kind: WaveKind,
    pub strength: f64,
    pub slope_lo: f64,
    pub slope_hi: f64,
}

pub fn contact_apply(j: usize, sigma: f64, base: &GasState) -> Result<GasState> {
    let mut s = *base;
    match j {
        2 => {
            let f = sigma.exp();
            s.u *= f;
            s.v *= f;
        }
        3 => s.rho *= sigma.exp(),
        4 => {
            let z = base.z + sigma / (base.rho * base.u);
            s.z = clamp_fraction(z)?;
        }
        _ => panic!("family {j} is not a contact"),
    }
    Ok(s)
}

/// Accepts round-off excursions of `Z` outside `[0, 1]`.
pub(crate) fn clamp_fraction(z: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&z) {
        return Err(GlimmError::MassFraction(z));
    }
    Ok(z.clamp(0.0, 1.0))
}

/// Prandtl-Meyer function.
pub fn prandtl_meyer(mach: f64, gamma: f64) -> f64 {
    let k = (gamma + 1.0) / (gamma - 1.0);
    let m = (mach * mach - 1.0).sqrt();
    k.sqrt() * (m / k.sqrt()).atan() - m.atan()
}

fn prandtl_meyer_slope(mach: f64, gamma: f64) -> f64 {
    let m2 = mach * mach;
    (m2 - 1.0).sqrt() / (mach * (1.0 + 0.5 * (gamma - 1.0) * m2))
}

/// Point of the rarefaction curve `R_j(U_0)` at which `lambda_j` has
/// increased by `sigma`. The curve is isentropic and isenthalpic and keeps
/// the Riemann invariant `theta -/+ nu(M)` of the other acoustic family.
pub fn rarefaction_apply(
    j: usize,
    sigma: f64,
    base: &GasState,
    gas: &GasConstants,
) -> Result<GasState> {
    let g = gas.gamma;
    let c0sq = base.sound_speed_sq(gas);
    let q0 = base.speed();
    let m0 = q0 / c0sq.sqrt();
    if m0 <= 1.0 {
        return Err(GlimmError::WaveDomain { family: j, sigma });
    }
    let theta0 = base.flow_angle();
    let nu0 = prandtl_meyer(m0, g);
    let target = (acoustic_speed(j, base, gas) + sigma).atan();
    // theta(M) = theta0 + dir (nu(M) - nu0); family angle theta - dir mu.
    let dir = if j == 1 { 1.0 } else { -1.0 };
    let resid =
        |m: f64| theta0 + dir * (prandtl_meyer(m, g) - nu0) - dir * (1.0 / m).asin() - target;
    let dresid = |m: f64| dir * (prandtl_meyer_slope(m, g) + 1.0 / (m * (m * m - 1.0).sqrt()));

    // resid is monotone in M; safeguarded Newton on a bracket.
    let increasing = dir > 0.0;
    let (mut lo, mut hi) = (1.0 + 1e-12, f64::INFINITY);
    let mut m = m0;
    let mut converged = false;
    for _ in 0..100 {
        let r = resid(m);
        if r.abs() < 1e-15 {
            converged = true;
            break;
        }
        if (r > 0.0) == increasing {
            hi = m;
        } else {
            lo = m;
        }
        let mut next = m - r / dresid(m);
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * lo.max(m)
            };
        }
        if (next - m).abs() <= 1e-15 * m {
            m = next;
            converged = true;
            break;
        }
        m = next;
    }
    if !converged || m <= 1.0 || !m.is_finite() {
        return Err(GlimmError::WaveDomain { family: j, sigma });
    }
    let theta = theta0 + dir * (prandtl_meyer(m, g) - nu0);
    let out = isentropic_state(base, m, theta, gas);
    if out.u <= sonic_speed(&out, gas) {
        return Err(GlimmError::WaveDomain { family: j, sigma });
    }
    Ok(out)
}

/// State with Mach number `m` and flow angle `theta` sharing entropy and
/// total enthalpy with `base`.
fn isentropic_state(base: &GasState, m: f64, theta: f64, gas: &GasConstants) -> GasState {
    let g = gas.gamma;
    let c0sq = base.sound_speed_sq(gas);
    let q0 = base.speed();
    let h0 = c0sq / (g - 1.0) + 0.5 * q0 * q0;
    let qsq = h0 / (1.0 / ((g - 1.0) * m * m) + 0.5);
    let csq = qsq / (m * m);
    let rho = base.rho * (csq / c0sq).powf(1.0 / (g - 1.0));
    let p = base.p * (rho / base.rho).powf(g);
    let q = qsq.sqrt();
    GasState::new(q * theta.cos(), q * theta.sin(), p, rho, base.z)
}

/// Point of the expansion branch of `R_j(base)` whose flow angle is
/// `theta`. For family 1 the angle must not be below that of `base`, for
/// family 5 not above it.
pub fn rarefaction_to_angle(
    j: usize,
    theta: f64,
    base: &GasState,
    gas: &GasConstants,
) -> Result<GasState> {
    let g = gas.gamma;
    let m0 = base.mach(gas);
    let dir = if j == 1 { 1.0 } else { -1.0 };
    let target = prandtl_meyer(m0, g) + dir * (theta - base.flow_angle());
    let numax = 0.5 * std::f64::consts::PI * (((g + 1.0) / (g - 1.0)).sqrt() - 1.0);
    if !(target >= 0.0 && target < numax) {
        return Err(GlimmError::WaveDomain {
            family: j,
            sigma: f64::NAN,
        });
    }
    let mut m = m0;
    for _ in 0..100 {
        let r = prandtl_meyer(m, g) - target;
        let mut next = m - r / prandtl_meyer_slope(m, g);
        if !(next > 1.0) {
            next = 0.5 * (m + 1.0);
        }
        let done = (next - m).abs() <= 1e-15 * m;
        m = next;
        if done {
            break;
        }
    }
    let out = isentropic_state(base, m, theta, gas);
    if out.u <= sonic_speed(&out, gas) {
        return Err(GlimmError::WaveDomain {
            family: j,
            sigma: f64::NAN,
        });
    }
    Ok(out)
}

/// State on the Hugoniot locus of `base` with density ratio `mu` in
/// family `j`, and the shock slope.
pub fn hugoniot_point(
    j: usize,
    mu: f64,
    base: &GasState,
    gas: &GasConstants,
) -> Result<(GasState, f64)> {
    let g = gas.gamma;
    let c0sq = base.sound_speed_sq(gas);
    let b = 0.5 * (g + 1.0) - 0.5 * (g - 1.0) * mu;
    let cbar2 = c0sq * mu / b;
    let disc = base.u * base.u + base.v * base.v - cbar2;
    let den = base.u * base.u - cbar2;
    if !(mu > 0.0 && b > 0.0 && disc > 0.0 && den > 0.0) {
        return Err(GlimmError::WaveDomain {
            family: j,
            sigma: f64::NAN,
        });
    }
    let sign = if j == 1 { -1.0 } else { 1.0 };
    let s = (base.u * base.v + sign * cbar2.sqrt() * disc.sqrt()) / den;
    Ok((jump_state(base, s, mu, c0sq / b * base.rho * (mu - 1.0)), s))
}

fn jump_state(base: &GasState, s: f64, mu: f64, dp: f64) -> GasState {
    let dv = dp / (base.rho * (s * base.u - base.v));
    let du = -s * dv;
    GasState::new(base.u + du, base.v + dv, base.p + dp, base.rho * mu, base.z)
}

/// Compressive shock with slope `s` attached to the upstream state `base`
/// (the shock polar `D(s, U)`).
pub fn shock_polar_state(s: f64, base: &GasState, gas: &GasConstants) -> Result<GasState> {
    let g = gas.gamma;
    let c0sq = base.sound_speed_sq(gas);
    let wn = base.v - s * base.u;
    let mn2 = wn * wn / ((1.0 + s * s) * c0sq);
    if !(mn2 >= 1.0 - 1e-12) {
        return Err(GlimmError::WaveDomain {
            family: 1,
            sigma: s,
        });
    }
    let mn2 = mn2.max(1.0);
    let mu = (g + 1.0) * mn2 / (2.0 + (g - 1.0) * mn2);
    let b = 0.5 * (g + 1.0) - 0.5 * (g - 1.0) * mu;
    Ok(jump_state(base, s, mu, c0sq / b * base.rho * (mu - 1.0)))
}

/// Admissible shock of family `j` with `lambda_j(post) - lambda_j(base)
/// = sigma < 0`. Returns the post state and the shock slope.
pub fn shock_apply(
    j: usize,
    sigma: f64,
    base: &GasState,
    gas: &GasConstants,
) -> Result<(GasState, f64)> {
    debug_assert!(sigma < 0.0);
    let lam0 = acoustic_speed(j, base, gas);
    let r = acoustic_eigenvector(j, base, gas);
    // Direction of the density change for decreasing lambda_j.
    let dir = -r[3].signum();
    let f = |mu: f64| match hugoniot_point(j, mu, base, gas) {
        Ok((st, _)) => Some(acoustic_speed(j, &st, gas) - lam0 - sigma).filter(|v| v.is_finite()),
        Err(_) => None,
    };
    let mut step = 2.0 * (sigma * r[3] / base.rho).abs().max(1e-300);
    let mut near = 1.0;
    let mut far = near;
    let mut capped = false;
    let mut found = false;
    for _ in 0..400 {
        far = near + dir * step;
        match f(far) {
            Some(v) if v <= 0.0 => {
                found = true;
                break;
            }
            Some(_) => {
                near = far;
                if !capped {
                    step *= 2.0;
                }
            }
            None => {
                // Past the admissible range; approach its edge.
                capped = true;
                step *= 0.5;
                if step < 1e-15 {
                    break;
                }
            }
        }
    }
    if !found {
        return Err(GlimmError::WaveDomain { family: j, sigma });
    }
    let mu = brent(near, far, |m| f(m).unwrap_or(f64::NAN))
        .ok_or(GlimmError::WaveDomain { family: j, sigma })?;
    let (st, s) = hugoniot_point(j, mu, base, gas)?;
    if st.u <= sonic_speed(&st, gas) {
        return Err(GlimmError::WaveDomain { family: j, sigma });
    }
    Ok((st, s))
}

/// Applies one acoustic wave and reports its geometry.
pub fn acoustic_apply(
    j: usize,
    sigma: f64,
    base: &GasState,
    gas: &GasConstants,
) -> Result<(GasState, WaveGeometry)> {
    let lam0 = acoustic_speed(j, base, gas);
    if sigma < 0.0 {
        let (st, s) = shock_apply(j, sigma, base, gas)?;
        Ok((
            st,
            WaveGeometry {
                family: j,
                kind: WaveKind::Shock,
                strength: sigma,
                slope_lo: s,
                slope_hi: s,
            },
        ))
    } else {
        let st = if sigma == 0.0 {
            *base
        } else {
            rarefaction_apply(j, sigma, base, gas)?
        };
        Ok((
            st,
            WaveGeometry {
                family: j,
                kind: WaveKind::Rarefaction,
                strength: sigma,
                slope_lo: lam0,
                slope_hi: lam0 + sigma,
            },
        ))
    }
}

pub fn wave_apply(j: usize, sigma: f64, base: &GasState, gas: &GasConstants) -> Result<GasState> {
    match j {
        1 | 5 => acoustic_apply(j, sigma, base, gas).map(|r| r.0),
        _ => contact_apply(j, sigma, base),
    }
}

/// Composite map `Phi(sigma; U_b)`, family 1 applied first. Returns all
/// six states from `U_b` to `U_a`.
pub fn lax_states(sigma: &Strengths, base: &GasState, gas: &GasConstants) -> Result<[GasState; 6]> {
    let mut out = [*base; 6];
    for j in 1..=5 {
        out[j] = wave_apply(j, sigma[j - 1], &out[j - 1], gas)?;
    }
    Ok(out)
}

pub fn lax_apply(sigma: &Strengths, base: &GasState, gas: &GasConstants) -> Result<GasState> {
    Ok(lax_states(sigma, base, gas)?[5])
}

struct RelativeTolerance;

impl Convergency<f64> for RelativeTolerance {
    fn is_root_found(&mut self, y: f64) -> bool {
        y == 0.0
    }
    fn is_converged(&mut self, a: f64, b: f64) -> bool {
        (a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }
    fn is_iteration_limit_reached(&mut self, iter: usize) -> bool {
        iter >= 400
    }
}

/// Bracketed root of `f` on `[a, b]` to a few ulps.
pub(crate) fn brent<F: FnMut(f64) -> f64>(a: f64, b: f64, f: F) -> Option<f64> {
    find_root_brent(a, b, f, &mut RelativeTolerance).ok()
}

/// Scaled Rankine-Hugoniot residual `|s [W] - [H]|_inf`.
pub fn rh_residual(a: &GasState, b: &GasState, s: f64, gas: &GasConstants) -> f64 {
    let (wa, wb) = (to_conserved(a, gas).0, to_conserved(b, gas).0);
    let (ha, hb) = (flux_h(a, gas), flux_h(b, gas));
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let scale = wa[i]
            .abs()
            .max(wb[i].abs())
            .max(ha[i].abs())
            .max(hb[i].abs())
            .max(1.0 + s.abs());
        let r = s * (wa[i] - wb[i]) - (ha[i] - hb[i]);
        worst = worst.max(r.abs() / scale);
    }
    worst
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::thermo::{eigenstructure, entropy};

    fn gas() -> GasConstants {
        GasConstants::new(1.4, 1.0, 0.0).unwrap()
    }

    fn base() -> GasState {
        GasState::new(2.0, 0.0, 1.0, 1.4, 0.0)
    }

    /// Classical fifth-order embedded Runge-Kutta pair on the primitive
    /// eigenvector field, used as an independent reference for the closed
    /// form rarefaction curves.
    fn integrate_eigen_ode(j: usize, sigma: f64, start: &GasState, g: &GasConstants) -> GasState {
        const A: [[f64; 6]; 6] = [
            [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
            [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
            [
                19372.0 / 6561.0,
                -25360.0 / 2187.0,
                64448.0 / 6561.0,
                -212.0 / 729.0,
                0.0,
                0.0,
            ],
            [
                9017.0 / 3168.0,
                -355.0 / 33.0,
                46732.0 / 5247.0,
                49.0 / 176.0,
                -5103.0 / 18656.0,
                0.0,
            ],
            [
                35.0 / 384.0,
                0.0,
                500.0 / 1113.0,
                125.0 / 192.0,
                -2187.0 / 6784.0,
                11.0 / 84.0,
            ],
        ];
        const E: [f64; 7] = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];
        let rhs = |y: [f64; 5]| acoustic_eigenvector(j, &GasState::from_array(y), g);
        let mut y = start.as_array();
        let mut t = 0.0;
        let mut dt = sigma / 16.0;
        while (sigma - t).abs() > 1e-15 {
            if (t + dt - sigma) * sigma.signum() > 0.0 {
                dt = sigma - t;
            }
            let mut k = [[0.0; 5]; 7];
            k[0] = rhs(y);
            for s in 0..6 {
                let mut yy = y;
                for i in 0..5 {
                    for (m, km) in k.iter().enumerate().take(s + 1) {
                        yy[i] += dt * A[s][m] * km[i];
                    }
                }
                k[s + 1] = rhs(yy);
            }
            let mut ynew = y;
            for i in 0..5 {
                for (m, km) in k.iter().enumerate().take(6) {
                    ynew[i] += dt * A[5][m] * km[i];
                }
            }
            let mut err: f64 = 0.0;
            for i in 0..5 {
                let e: f64 = (0..7).map(|m| E[m] * k[m][i]).sum::<f64>() * dt;
                err = err.max(e.abs() / (1e-12 + 1e-12 * y[i].abs()));
            }
            if err <= 1.0 {
                t += dt;
                y = ynew;
            }
            dt *= (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        }
        GasState::from_array(y)
    }

    #[test]
    fn rarefaction_agrees_with_eigenvector_ode() {
        let g = gas();
        let starts = [base(), GasState::new(2.4, 0.3, 0.8, 1.1, 0.2)];
        for st in starts {
            for j in [1, 5] {
                for sigma in [1e-3, 0.02, 0.08, -0.05] {
                    let a = rarefaction_apply(j, sigma, &st, &g).unwrap();
                    let b = integrate_eigen_ode(j, sigma, &st, &g);
                    let (aa, bb) = (a.as_array(), b.as_array());
                    for i in 0..5 {
                        assert!(
                            (aa[i] - bb[i]).abs() < 1e-9,
                            "j={j} sigma={sigma} i={i}: {} {}",
                            aa[i],
                            bb[i]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rarefaction_moves_speed_by_sigma_and_keeps_entropy() {
        let g = gas();
        for j in [1, 5] {
            let st = rarefaction_apply(j, 0.05, &base(), &g).unwrap();
            assert!(
                (acoustic_speed(j, &st, &g) - acoustic_speed(j, &base(), &g) - 0.05).abs() < 1e-13
            );
            assert!((entropy(&st, &g) - entropy(&base(), &g)).abs() < 1e-12);
        }
    }

    #[test]
    fn contact_examples() {
        let b = base();
        let s = contact_apply(2, 0.1, &b).unwrap();
        assert!((s.u - 2.0 * 0.1f64.exp()).abs() < 1e-15);
        assert_eq!((s.v, s.p, s.rho), (b.v, b.p, b.rho));
        let s = contact_apply(3, -0.2, &b).unwrap();
        assert!((s.rho - 1.4 * (-0.2f64).exp()).abs() < 1e-15);
        let s = contact_apply(4, 0.28, &b).unwrap();
        assert!((s.z - 0.1).abs() < 1e-15);
        assert!(matches!(
            contact_apply(4, -0.28, &b),
            Err(GlimmError::MassFraction(_))
        ));
    }

    #[test]
    fn shocks_satisfy_jump_conditions() {
        let g = gas();
        for st in [base(), GasState::new(2.4, 0.3, 0.8, 1.1, 0.2)] {
            for j in [1, 5] {
                for sigma in [-1e-4, -0.01, -0.1, -0.2] {
                    let (post, s) = shock_apply(j, sigma, &st, &g).unwrap();
                    assert!(
                        rh_residual(&post, &st, s, &g) < 1e-12,
                        "j={j} sigma={sigma}"
                    );
                    let d = acoustic_speed(j, &post, &g) - acoustic_speed(j, &st, &g);
                    assert!((d - sigma).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn shocks_produce_entropy_downstream() {
        // Family 1: the base state lies upstream. Family 5: downstream.
        let g = gas();
        let (p1, _) = shock_apply(1, -0.1, &base(), &g).unwrap();
        assert!(entropy(&p1, &g) > entropy(&base(), &g));
        assert!(p1.rho > base().rho);
        let (p5, _) = shock_apply(5, -0.1, &base(), &g).unwrap();
        assert!(entropy(&p5, &g) < entropy(&base(), &g));
        assert!(p5.rho < base().rho);
    }

    #[test]
    fn shock_slope_between_characteristic_speeds() {
        let g = gas();
        for j in [1, 5] {
            let (post, s) = shock_apply(j, -0.05, &base(), &g).unwrap();
            let (a, b) = (acoustic_speed(j, &base(), &g), acoustic_speed(j, &post, &g));
            assert!(s < a && s > b, "j={j}: {b} < {s} < {a}");
        }
    }

    #[test]
    fn acoustic_curves_are_second_order_tangent() {
        // Shock and rarefaction branches agree to second order at sigma = 0.
        let g = gas();
        let b = GasState::new(2.2, 0.1, 1.0, 1.3, 0.0);
        for j in [1, 5] {
            let mut prev = f64::NAN;
            for eps in [4e-3, 2e-3, 1e-3] {
                let (s, _) = shock_apply(j, -eps, &b, &g).unwrap();
                let r = rarefaction_apply(j, -eps, &b, &g).unwrap();
                let d = s
                    .as_array()
                    .iter()
                    .zip(r.as_array())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                if prev.is_finite() {
                    // Third order: halving eps divides the gap by about 8.
                    assert!(prev / d > 6.0, "j={j}: ratio {}", prev / d);
                }
                prev = d;
            }
        }
    }

    #[test]
    fn eigenvectors_are_tangent_to_curves() {
        let g = gas();
        let b = base();
        let e = eigenstructure(&b, &g).unwrap();
        let eps = 1e-6;
        for j in 1..=5 {
            let a = wave_apply(j, eps, &b, &g).unwrap().as_array();
            let bb = b.as_array();
            for i in 0..5 {
                let d = (a[i] - bb[i]) / eps;
                assert!((d - e.r[j - 1][i]).abs() < 1e-5, "j={j} i={i}");
            }
        }
    }

    #[test]
    fn polar_state_matches_density_chart() {
        let g = gas();
        let (post, s) = shock_apply(1, -0.15, &base(), &g).unwrap();
        let q = shock_polar_state(s, &base(), &g).unwrap();
        for (x, y) in post.as_array().iter().zip(q.as_array()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn lax_map_identity_at_zero() {
        let g = gas();
        let b = GasState::new(2.2, 0.1, 1.0, 1.3, 0.3);
        assert_eq!(lax_apply(&[0.0; 5], &b, &g).unwrap(), b);
    }
}
