//! Gas model: constants, primitive and conserved states, characteristic
//! structure, entropy and the reaction rate.

use serde::{Deserialize, Serialize};

use crate::error::{GlimmError, Result};

/// Polytropic gas with a one-step exothermic reaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GasConstants {
    pub gamma: f64,
    pub r_gas: f64,
    pub q_heat: f64,
}

impl GasConstants {
    pub fn new(gamma: f64, r_gas: f64, q_heat: f64) -> Result<Self> {
        let g = GasConstants {
            gamma,
            r_gas,
            q_heat,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 1.0) {
            return Err(GlimmError::InvalidGas("gamma must exceed 1".into()));
        }
        if !(self.r_gas.is_finite() && self.r_gas > 0.0) {
            return Err(GlimmError::InvalidGas("r_gas must be positive".into()));
        }
        if !(self.q_heat.is_finite() && self.q_heat >= 0.0) {
            return Err(GlimmError::InvalidGas("q_heat must be nonnegative".into()));
        }
        Ok(())
    }

    /// Specific heat at constant volume, `R / (gamma - 1)`.
    pub fn c_v(&self) -> f64 {
        self.r_gas / (self.gamma - 1.0)
    }
}

impl Default for GasConstants {
    fn default() -> Self {
        GasConstants {
            gamma: 1.4,
            r_gas: 1.0,
            q_heat: 0.0,
        }
    }
}

/// Primitive state `(u, v, p, rho, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasState {
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub rho: f64,
    pub z: f64,
}

impl GasState {
    pub const fn new(u: f64, v: f64, p: f64, rho: f64, z: f64) -> Self {
        GasState { u, v, p, rho, z }
    }

    /// Uniform flow of Mach number `mach` along `angle` (radians) with
    /// the given pressure and density.
    pub fn from_mach(mach: f64, angle: f64, p: f64, rho: f64, z: f64, gas: &GasConstants) -> Self {
        let c = (gas.gamma * p / rho).sqrt();
        let q = mach * c;
        GasState::new(q * angle.cos(), q * angle.sin(), p, rho, z)
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.u, self.v, self.p, self.rho, self.z]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        GasState::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn speed(&self) -> f64 {
        self.u.hypot(self.v)
    }

    /// Flow angle `atan(v/u)`.
    pub fn flow_angle(&self) -> f64 {
        self.v.atan2(self.u)
    }

    pub fn sound_speed_sq(&self, gas: &GasConstants) -> f64 {
        gas.gamma * self.p / self.rho
    }

    pub fn mach(&self, gas: &GasConstants) -> f64 {
        self.speed() / sonic_speed(self, gas)
    }

    /// Checks positivity, finiteness and `Z` in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        let a = self.as_array();
        if a.iter().any(|x| !x.is_finite()) {
            return Err(GlimmError::InvalidState(format!(
                "non-finite component in {self:?}"
            )));
        }
        if self.p <= 0.0 || self.rho <= 0.0 {
            return Err(GlimmError::InvalidState(format!(
                "pressure and density must be positive (p = {}, rho = {})",
                self.p, self.rho
            )));
        }
        if !(0.0..=1.0).contains(&self.z) {
            return Err(GlimmError::MassFraction(self.z));
        }
        Ok(())
    }

    /// `validate` plus `u > c`.
    pub fn validate_supersonic(&self, gas: &GasConstants) -> Result<()> {
        self.validate()?;
        let c = sonic_speed(self, gas);
        if self.u <= c {
            return Err(GlimmError::Subsonic { u: self.u, c });
        }
        Ok(())
    }
}

/// Conserved vector `W(U)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved(pub [f64; 5]);

pub fn sonic_speed(s: &GasState, gas: &GasConstants) -> f64 {
    (gas.gamma * s.p / s.rho).sqrt()
}

pub fn temperature(s: &GasState, gas: &GasConstants) -> f64 {
    s.p / (gas.r_gas * s.rho)
}

/// Specific enthalpy `gamma p / ((gamma - 1) rho)`.
pub fn enthalpy(s: &GasState, gas: &GasConstants) -> f64 {
    gas.gamma * s.p / ((gas.gamma - 1.0) * s.rho)
}

pub fn to_conserved(s: &GasState, gas: &GasConstants) -> Conserved {
    let m = s.rho * s.u;
    let e = enthalpy(s, gas) + 0.5 * (s.u * s.u + s.v * s.v);
    Conserved([m, m * s.u + s.p, m * s.v, m * e, m * s.z])
}

/// Flux in the transverse direction, `H(U)`.
pub fn flux_h(s: &GasState, gas: &GasConstants) -> [f64; 5] {
    let n = s.rho * s.v;
    let e = enthalpy(s, gas) + 0.5 * (s.u * s.u + s.v * s.v);
    [n, n * s.u, n * s.v + s.p, n * e, n * s.z]
}

/// Reaction source `G(U)`.
pub fn source_g(s: &GasState, gas: &GasConstants, rate: &ReactionRate) -> [f64; 5] {
    let w = s.rho * rate.eval(temperature(s, gas), gas) * s.z;
    [0.0, 0.0, 0.0, gas.q_heat * w, -w]
}

/// Physical entropy `c_v ln(p / rho^gamma)`.
pub fn entropy(s: &GasState, gas: &GasConstants) -> f64 {
    gas.c_v() * (s.p.ln() - gas.gamma * s.rho.ln())
}

/// Entropy and entropy flux `(-rho u S, -rho v S)`.
pub fn entropy_pair(s: &GasState, gas: &GasConstants) -> (f64, f64) {
    let sv = entropy(s, gas);
    (-s.rho * s.u * sv, -s.rho * s.v * sv)
}

/// Gradient of `-rho u S` with respect to the conserved vector, dotted
/// with the reaction source. Equals `-q rho phi Z / T`.
pub fn entropy_source(s: &GasState, gas: &GasConstants, rate: &ReactionRate) -> f64 {
    let t = temperature(s, gas);
    -gas.q_heat * s.rho * rate.eval(t, gas) * s.z / t
}

/// Characteristic speeds, right eigenvectors in primitive variables, and
/// the normalizations that make `r_j . grad lambda_j = 1` for j = 1, 5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenstructure {
    pub lambda: [f64; 5],
    /// `r[j]` is the eigenvector of family `j + 1`.
    pub r: [[f64; 5]; 5],
}

/// Acoustic speed of family 1 (`sign = -1`) or 5 (`sign = +1`) and its
/// partial derivatives with respect to `(u, v, c^2)`.
fn acoustic(u: f64, v: f64, c2: f64, sign: f64) -> (f64, [f64; 3]) {
    let c = c2.sqrt();
    let d = (u * u + v * v - c2).sqrt();
    let den = u * u - c2;
    let num = u * v + sign * c * d;
    let lam = num / den;
    let dn = [
        v + sign * c * u / d,
        u + sign * c * v / d,
        sign * (d / (2.0 * c) - c / (2.0 * d)),
    ];
    let dd = [2.0 * u, 0.0, -1.0];
    (
        lam,
        [
            (dn[0] - lam * dd[0]) / den,
            (dn[1] - lam * dd[1]) / den,
            (dn[2] - lam * dd[2]) / den,
        ],
    )
}

fn family_sign(j: usize) -> f64 {
    match j {
        1 => -1.0,
        5 => 1.0,
        _ => panic!("family {j} is linearly degenerate"),
    }
}

/// Speed of the genuinely nonlinear family `j` (1 or 5).
pub fn acoustic_speed(j: usize, s: &GasState, gas: &GasConstants) -> f64 {
    acoustic(s.u, s.v, s.sound_speed_sq(gas), family_sign(j)).0
}

/// Gradient of `lambda_j` with respect to `(u, v, p, rho)`.
pub fn acoustic_gradient(j: usize, s: &GasState, gas: &GasConstants) -> [f64; 4] {
    let c2 = s.sound_speed_sq(gas);
    let (_, d) = acoustic(s.u, s.v, c2, family_sign(j));
    [d[0], d[1], d[2] * gas.gamma / s.rho, -d[2] * c2 / s.rho]
}

/// Normalized right eigenvector of the acoustic family `j`.
pub fn acoustic_eigenvector(j: usize, s: &GasState, gas: &GasConstants) -> [f64; 5] {
    let c2 = s.sound_speed_sq(gas);
    let (lam, d) = acoustic(s.u, s.v, c2, family_sign(j));
    let m = s.rho * (lam * s.u - s.v);
    let raw = [-lam, 1.0, m, m / c2, 0.0];
    let grad = [d[0], d[1], d[2] * gas.gamma / s.rho, -d[2] * c2 / s.rho];
    let dot: f64 = (0..4).map(|i| raw[i] * grad[i]).sum();
    let kappa = 1.0 / dot;
    raw.map(|x| x * kappa)
}

pub fn eigenstructure(s: &GasState, gas: &GasConstants) -> Result<Eigenstructure> {
    s.validate_supersonic(gas)?;
    let lam1 = acoustic_speed(1, s, gas);
    let lam5 = acoustic_speed(5, s, gas);
    let slope = s.v / s.u;
    Ok(Eigenstructure {
        lambda: [lam1, slope, slope, slope, lam5],
        r: [
            acoustic_eigenvector(1, s, gas),
            [s.u, s.v, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, s.rho, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0 / (s.rho * s.u)],
            acoustic_eigenvector(5, s, gas),
        ],
    })
}

/// Reaction rate `phi(T)`. All forms are nonnegative and nondecreasing
/// in `T` for admissible parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ReactionRate {
    /// `T^alpha exp(-E / (R T))`.
    Arrhenius {
        alpha: f64,
        activation: f64,
    },
    /// `max(floor, slope T)`.
    AffineFloor {
        slope: f64,
        floor: f64,
    },
    Constant {
        value: f64,
    },
}

impl Default for ReactionRate {
    fn default() -> Self {
        ReactionRate::Constant { value: 0.0 }
    }
}

impl ReactionRate {
    pub fn eval(&self, t: f64, gas: &GasConstants) -> f64 {
        match *self {
            ReactionRate::Arrhenius { alpha, activation } => {
                t.powf(alpha) * (-activation / (gas.r_gas * t)).exp()
            }
            ReactionRate::AffineFloor { slope, floor } => floor.max(slope * t),
            ReactionRate::Constant { value } => value,
        }
    }

    /// Smallest value over `T >= t_lo`.
    pub fn min_from(&self, t_lo: f64, gas: &GasConstants) -> f64 {
        self.eval(t_lo, gas)
    }

    /// Returns the offending parameter name when the rate is not
    /// nonnegative and nondecreasing.
    pub fn validate(&self) -> std::result::Result<(), &'static str> {
        match *self {
            ReactionRate::Arrhenius { alpha, activation } => {
                if !(alpha.is_finite() && alpha >= 0.0) {
                    return Err("alpha");
                }
                if !(activation.is_finite() && activation >= 0.0) {
                    return Err("activation");
                }
            }
            ReactionRate::AffineFloor { slope, floor } => {
                if !(slope.is_finite() && slope >= 0.0) {
                    return Err("slope");
                }
                if !(floor.is_finite() && floor >= 0.0) {
                    return Err("floor");
                }
            }
            ReactionRate::Constant { value } => {
                if !(value.is_finite() && value >= 0.0) {
                    return Err("value");
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod test {
    use super::*;

    fn gas() -> GasConstants {
        GasConstants::new(1.4, 1.0, 0.0).unwrap()
    }

    #[test]
    fn rejects_bad_gamma() {
        let e = GasConstants::new(1.0, 1.0, 0.0).unwrap_err();
        assert!(e.to_string().contains("gamma must exceed 1"));
    }

    #[test]
    fn sound_speed_of_reference_state() {
        let s = GasState::new(1.0, 0.0, 1.0, 1.4, 0.0);
        assert!((sonic_speed(&s, &gas()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conserved_vector_at_rest_frame() {
        let s = GasState::new(1.0, 0.0, 1.0, 1.0, 0.0);
        let w = to_conserved(&s, &gas()).0;
        let expect = [1.0, 2.0, 0.0, 4.0, 0.0];
        for i in 0..5 {
            assert!((w[i] - expect[i]).abs() < 1e-14, "{i}: {}", w[i]);
        }
    }

    #[test]
    fn acoustic_speed_mach_two() {
        let s = GasState::new(2.0, 0.0, 1.0, 1.4, 0.0);
        let e = eigenstructure(&s, &gas()).unwrap();
        assert!((e.lambda[4] - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((e.lambda[0] + 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(e.lambda[1], 0.0);
    }

    #[test]
    fn speeds_are_mach_line_slopes() {
        let g = gas();
        let s = GasState::from_mach(2.3, 0.2, 0.7, 1.1, 0.0, &g);
        let mu = (1.0 / 2.3f64).asin();
        assert!((acoustic_speed(1, &s, &g) - (0.2 - mu).tan()).abs() < 1e-13);
        assert!((acoustic_speed(5, &s, &g) - (0.2 + mu).tan()).abs() < 1e-13);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = gas();
        let s = GasState::new(2.1, 0.3, 0.9, 1.2, 0.0);
        for j in [1, 5] {
            let grad = acoustic_gradient(j, &s, &g);
            let base = s.as_array();
            for i in 0..4 {
                let h = 1e-6;
                let mut a = base;
                let mut b = base;
                a[i] += h;
                b[i] -= h;
                let fd = (acoustic_speed(j, &GasState::from_array(a), &g)
                    - acoustic_speed(j, &GasState::from_array(b), &g))
                    / (2.0 * h);
                assert!(
                    (fd - grad[i]).abs() < 1e-8,
                    "j={j} i={i}: {fd} vs {}",
                    grad[i]
                );
            }
        }
    }

    #[test]
    fn eigenvectors_are_normalized() {
        let g = gas();
        let s = GasState::new(2.5, -0.4, 1.3, 0.8, 0.2);
        for j in [1, 5] {
            let r = acoustic_eigenvector(j, &s, &g);
            let d = acoustic_gradient(j, &s, &g);
            let dot: f64 = (0..4).map(|i| r[i] * d[i]).sum();
            assert!((dot - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn subsonic_state_is_rejected() {
        let s = GasState::new(0.5, 0.0, 1.0, 1.4, 0.0);
        assert!(matches!(
            eigenstructure(&s, &gas()),
            Err(GlimmError::Subsonic { .. })
        ));
    }

    #[test]
    fn entropy_source_matches_gradient() {
        // -grad_W(rho u S) . G computed by differencing along w4.
        let g = GasConstants::new(1.4, 1.0, 0.7).unwrap();
        let rate = ReactionRate::Constant { value: 0.3 };
        let s = GasState::new(2.0, 0.1, 1.0, 1.4, 0.4);
        let w = to_conserved(&s, &g).0;
        let eta = |w4: f64| {
            let mut ww = w;
            ww[3] = w4;
            let st = crate::riemann::from_conserved(&Conserved(ww), &g).unwrap();
            entropy_pair(&st, &g).0
        };
        let h = 1e-6;
        let d = (eta(w[3] + h) - eta(w[3] - h)) / (2.0 * h);
        let gsrc = source_g(&s, &g, &rate);
        assert!((d * gsrc[3] - entropy_source(&s, &g, &rate)).abs() < 1e-8);
    }

    #[test]
    fn rate_forms() {
        let g = gas();
        let a = ReactionRate::Arrhenius {
            alpha: 1.0,
            activation: 2.0,
        };
        assert!((a.eval(2.0, &g) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        let f = ReactionRate::AffineFloor {
            slope: 0.5,
            floor: 0.2,
        };
        assert_eq!(f.eval(0.1, &g), 0.2);
        assert_eq!(f.eval(2.0, &g), 1.0);
        assert!(ReactionRate::Constant { value: -1.0 }.validate().is_err());
    }
}
