//! Measured interaction estimates: weak-wave mergers, wall reflections and
//! strong-shock interactions near a reference state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::riemann::{oblique_shock_polar, solve_interior, solve_lateral, solve_strong, WallSide};
use crate::thermo::{GasConstants, GasState};
use crate::waves::{lax_apply, wave_apply, Strengths};

use super::functional::{quadratic, WaveRecord};

/// Interaction potential of a fan `alpha` below a fan `beta`.
pub fn interaction_potential(alpha: &Strengths, beta: &Strengths) -> f64 {
    let rec = |fan: usize, j: usize, s: f64| WaveRecord {
        fan,
        family: j,
        strength: s,
        shock: s < 0.0 && (j == 1 || j == 5),
        y_lo: 0.0,
        y_hi: 0.0,
    };
    let mut waves: Vec<WaveRecord> = (1..=5).map(|j| rec(0, j, alpha[j - 1])).collect();
    waves.extend((1..=5).map(|j| rec(1, j, beta[j - 1])));
    quadratic(&waves)
}

fn random_strengths(rng: &mut ChaCha8Rng, radius: f64) -> Strengths {
    let mut s = [0.0; 5];
    for x in &mut s {
        *x = rng.gen_range(-0.2..0.2) * radius;
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct MergerStats {
    pub samples: usize,
    /// Samples with a vanishing potential, for which no ratio is formed.
    pub skipped: usize,
    pub failures: usize,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub p99_ratio: f64,
}

/// Ensemble of mergers `gamma = solve(U_b, Phi(beta; Phi(alpha; U_b)))`
/// with `|alpha|_1, |beta|_1 <= radius`; ratios
/// `max_i |gamma_i - alpha_i - beta_i| / Delta(alpha, beta)`.
pub fn merger_survey(
    base: &GasState,
    radius: f64,
    samples: usize,
    seed: u64,
    gas: &GasConstants,
) -> MergerStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Z stays inside [0, 1] under the sampled family 4 waves.
    let base = &GasState { z: 0.5, ..*base };
    let mut ratios = Vec::with_capacity(samples);
    let (mut skipped, mut failures) = (0, 0);
    for _ in 0..samples {
        let shift = random_strengths(&mut rng, radius);
        let alpha = random_strengths(&mut rng, radius);
        let beta = random_strengths(&mut rng, radius);
        let run = || -> Result<Option<f64>> {
            let ub = lax_apply(&shift, base, gas)?;
            let um = lax_apply(&alpha, &ub, gas)?;
            let ua = lax_apply(&beta, &um, gas)?;
            let g = solve_interior(&ub, &ua, gas)?.strengths;
            let delta = interaction_potential(&alpha, &beta);
            if delta < 1e-12 {
                return Ok(None);
            }
            let dev = (0..5)
                .map(|i| (g[i] - alpha[i] - beta[i]).abs())
                .fold(0.0, f64::max);
            Ok(Some(dev / delta))
        };
        match run() {
            Ok(Some(r)) => ratios.push(r),
            Ok(None) => skipped += 1,
            Err(_) => failures += 1,
        }
    }
    ratios.sort_by(f64::total_cmp);
    let pick = |q: f64| {
        if ratios.is_empty() {
            f64::NAN
        } else {
            ratios[((ratios.len() - 1) as f64 * q).round() as usize]
        }
    };
    MergerStats {
        samples,
        skipped,
        failures,
        max_ratio: pick(1.0),
        median_ratio: pick(0.5),
        p99_ratio: pick(0.99),
    }
}

/// Reflection coefficients at a wall above the fluid:
/// `delta_1 = beta_1 + K_b0 omega + sum_i K_bi alpha_i + O(...)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryCoefficients {
    pub k_b0: f64,
    /// `K_b2` .. `K_b5`.
    pub k_b: [f64; 4],
}

impl BoundaryCoefficients {
    pub fn max_abs(&self) -> f64 {
        self.k_b.iter().fold(self.k_b0.abs(), |m, k| m.max(k.abs()))
    }
}

/// Fits the reflection coefficients by central differences at a state
/// flowing along the wall.
pub fn boundary_coefficients(
    wall_state: &GasState,
    eps: f64,
    gas: &GasConstants,
) -> Result<BoundaryCoefficients> {
    let wall = wall_state.flow_angle();
    // Gas waves do not see Z; a mid-range value leaves room for alpha_4.
    let wall_state = &GasState {
        z: 0.5,
        ..*wall_state
    };
    // Waves alpha_i (i >= 2) leave U_b = wall_state; beta_1 turns U_m back
    // along the old wall; delta_1 turns U_b along the new wall.
    let reflect = |i: usize, a: f64| -> Result<f64> {
        let mut sigma = [0.0; 5];
        sigma[i - 1] = a;
        let um = lax_apply(&sigma, wall_state, gas)?;
        let beta1 = solve_lateral(&um, wall, WallSide::Above, gas)?.strengths[0];
        Ok(-beta1)
    };
    let turn = |w: f64| -> Result<f64> {
        Ok(solve_lateral(wall_state, wall + w, WallSide::Above, gas)?.strengths[0])
    };
    let k_b0 = (turn(eps)? - turn(-eps)?) / (2.0 * eps);
    let mut k_b = [0.0; 4];
    for i in 2..=5 {
        k_b[i - 2] = (reflect(i, eps)? - reflect(i, -eps)?) / (2.0 * eps);
    }
    Ok(BoundaryCoefficients { k_b0, k_b })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StrongCoefficients {
    /// Background shock slope.
    pub slope: f64,
    /// `ds'/d beta_1`.
    pub k_s1: f64,
    /// `d delta_5/d beta_1`.
    pub k_s5: f64,
}

/// A weak 1-wave `beta_1` reaching the strong shock from behind; fits the
/// change of shock slope and the emitted 5-wave.
pub fn strong_coefficients(
    upstream: &GasState,
    deflection: f64,
    eps: f64,
    gas: &GasConstants,
) -> Result<StrongCoefficients> {
    let (post, slope) = oblique_shock_polar(upstream, deflection, gas)?;
    let hit = |b1: f64| -> Result<(f64, f64)> {
        let ua = wave_apply(1, b1, &post, gas)?;
        let f = solve_strong(upstream, &ua, slope, gas)?;
        Ok((f.strong.unwrap_or(slope), f.strengths[4]))
    };
    let (sp, dp) = hit(eps)?;
    let (sm, dm) = hit(-eps)?;
    Ok(StrongCoefficients {
        slope,
        k_s1: (sp - sm) / (2.0 * eps),
        k_s5: (dp - dm) / (2.0 * eps),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub mergers: MergerStats,
    pub boundary: BoundaryCoefficients,
    pub strong: StrongCoefficients,
}

pub fn survey(
    base: &GasState,
    radius: f64,
    samples: usize,
    seed: u64,
    deflection: f64,
    gas: &GasConstants,
) -> Result<SurveyReport> {
    let wall_state = GasState {
        v: 0.0,
        u: base.speed(),
        ..*base
    };
    Ok(SurveyReport {
        mergers: merger_survey(base, radius, samples, seed, gas),
        boundary: boundary_coefficients(&wall_state, 1e-4, gas)?,
        strong: strong_coefficients(base, deflection, 1e-4, gas)?,
    })
}

#[cfg(test)]
mod test {
    use super::*;

    fn setup() -> (GasConstants, GasState) {
        let g = GasConstants::new(1.4, 1.0, 0.0).unwrap();
        (g, GasState::from_mach(2.0, 0.0, 1.0, 1.4, 0.5, &g))
    }

    #[test]
    fn potential_counts_same_family_shock_pairs() {
        let a = [0.0, 0.0, 0.0, 0.0, 0.02];
        let b = [0.0, 0.0, 0.0, 0.0, -0.03];
        assert!((interaction_potential(&a, &b) - 0.0006).abs() < 1e-18);
        let b = [0.0, 0.0, 0.0, 0.0, 0.03];
        assert_eq!(interaction_potential(&a, &b), 0.0);
        // A 1-wave above a 5-wave approaches it.
        let b = [0.04, 0.0, 0.0, 0.0, 0.0];
        assert!((interaction_potential(&a, &b) - 0.0008).abs() < 1e-18);
    }

    #[test]
    fn non_interacting_fans_superpose() {
        let (g, s) = setup();
        let alpha = [0.01, 0.0, 0.0, 0.0, 0.0];
        let beta = [0.0, 0.0, 0.0, 0.0, -0.02];
        let ua = lax_apply(&beta, &lax_apply(&alpha, &s, &g).unwrap(), &g).unwrap();
        let f = solve_interior(&s, &ua, &g).unwrap();
        assert!((f.strengths[0] - 0.01).abs() < 1e-10);
        assert!((f.strengths[4] + 0.02).abs() < 1e-10);
    }

    #[test]
    fn reflection_coefficient_of_five_waves_is_one() {
        let (g, s) = setup();
        let k = boundary_coefficients(&s, 1e-4, &g).unwrap();
        assert!((k.k_b[3] - 1.0).abs() < 1e-3, "{k:?}");
        for kb in &k.k_b[..3] {
            assert!(kb.abs() < 1e-3, "{k:?}");
        }
    }
}
