//! Fractional-step random choice scheme.
//!
//! Each strip `kh <= x < (k+1)h` carries piecewise constant states on
//! cells of width `2l`. Riemann problems are solved at the cell
//! interfaces (and at the wall), the solution at `x = (k+1)h-` is sampled
//! at `theta_{k+1}`, and the sampled states receive one reaction step of
//! length `h`.

use rayon::prelude::*;

use crate::error::{GlimmError, Result};
use crate::reaction::react_state;
use crate::riemann::{solve_interior, solve_lateral, solve_strong, WallSide, WaveFan};
use crate::thermo::{GasConstants, GasState, ReactionRate};
use crate::waves::{lax_apply, Strengths};

/// Piecewise constant data `U_0(y)`: `far_field` below the first step,
/// and `steps[i].1` on `[steps[i].0, steps[i+1].0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    pub far_field: GasState,
    pub steps: Vec<(f64, GasState)>,
}

/// A jump in the initial data, given by the wave strengths that connect
/// the state below to the state above. With `count > 1` the jump is
/// spread over `count` equal steps across `width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    pub at: f64,
    pub width: f64,
    pub count: usize,
    pub strengths: Strengths,
}

impl InitialProfile {
    pub fn uniform(s: GasState) -> Self {
        InitialProfile {
            far_field: s,
            steps: Vec::new(),
        }
    }

    pub fn from_layers(far_field: GasState, layers: &[Layer], gas: &GasConstants) -> Result<Self> {
        let mut sorted = layers.to_vec();
        sorted.sort_by(|a, b| a.at.total_cmp(&b.at));
        let mut cur = far_field;
        let mut steps = Vec::new();
        for layer in &sorted {
            let n = layer.count.max(1);
            let part = layer.strengths.map(|s| s / n as f64);
            for i in 0..n {
                let y = if n == 1 {
                    layer.at
                } else {
                    layer.at + layer.width * i as f64 / (n - 1) as f64
                };
                cur = lax_apply(&part, &cur, gas)?;
                cur.validate_supersonic(gas)?;
                steps.push((y, cur));
            }
        }
        steps.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(InitialProfile { far_field, steps })
    }

    pub fn state(&self, y: f64) -> GasState {
        let i = self.steps.partition_point(|(at, _)| *at <= y);
        if i == 0 {
            self.far_field
        } else {
            self.steps[i - 1].1
        }
    }

    /// Interval outside of which the data is constant.
    pub fn support(&self) -> Option<(f64, f64)> {
        Some((self.steps.first()?.0, self.steps.last()?.0))
    }

    pub fn all_states(&self) -> impl Iterator<Item = &GasState> {
        std::iter::once(&self.far_field).chain(self.steps.iter().map(|(_, s)| s))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Whole line in `y`, truncated to `cells` cells starting at `y_min`
    /// with constant extrapolation beyond.
    Cauchy { y_min: f64 },
    /// Region below the wall `y = g(x)`; `wall[k] = g(kh)`. The incoming
    /// flow has angle `inflow_angle`. With `strong` the vertex produces a
    /// strong 1-shock that is solved separately.
    Wedge {
        wall: Vec<f64>,
        inflow_angle: f64,
        strong: bool,
    },
}

/// One strip of the approximate solution.
#[derive(Debug, Clone)]
pub struct Strip {
    pub k: usize,
    pub x: f64,
    /// Lower edge of cell 0.
    pub y0: f64,
    pub theta: f64,
    pub states: Vec<GasState>,
    /// States before the reaction step.
    pub pre_states: Vec<GasState>,
    /// Whether each cell lies behind the strong shock.
    pub post: Vec<bool>,
    /// `fans[i - 1]` sits at interface `i`, `y0 + 2 i l`.
    pub fans: Vec<WaveFan>,
    /// Wall reflection fan at the top corner.
    pub corner: Option<WaveFan>,
    /// Strong shock position at `x` and its slope.
    pub shock: Option<(f64, f64)>,
}

impl Strip {
    pub fn cells(&self) -> usize {
        self.states.len()
    }

    pub fn reacted(&self) -> bool {
        self.states != self.pre_states
    }
}

#[derive(Debug, Clone)]
pub struct Scheme {
    pub gas: GasConstants,
    pub rate: ReactionRate,
    pub h: f64,
    pub l: f64,
    pub cells: usize,
    pub domain: Domain,
    pub initial: InitialProfile,
    /// Bound `m` on `|g'|` used in the CFL condition.
    pub wall_slope: f64,
    /// Fail when waves reach the ends of a Cauchy window.
    pub check_window: bool,
}

impl Scheme {
    pub fn cfl_bound(&self) -> f64 {
        (self.l - self.wall_slope * self.h) / (2.0 * self.h)
    }

    pub fn is_wedge(&self) -> bool {
        matches!(self.domain, Domain::Wedge { .. })
    }

    pub fn is_strong(&self) -> bool {
        matches!(self.domain, Domain::Wedge { strong: true, .. })
    }

    pub fn wall_y(&self, k: usize) -> f64 {
        match &self.domain {
            Domain::Wedge { wall, .. } => wall[k.min(wall.len() - 1)],
            Domain::Cauchy { .. } => f64::INFINITY,
        }
    }

    /// Direction of the wall segment from `C_k` to `C_{k+1}`.
    pub fn wall_angle(&self, k: usize) -> f64 {
        ((self.wall_y(k + 1) - self.wall_y(k)) / self.h).atan()
    }

    /// Turning angle of the wall at the corner `C_k`.
    pub fn wall_turn(&self, k: usize) -> f64 {
        match &self.domain {
            Domain::Wedge { inflow_angle, .. } => {
                let before = if k == 0 {
                    *inflow_angle
                } else {
                    self.wall_angle(k - 1)
                };
                self.wall_angle(k) - before
            }
            Domain::Cauchy { .. } => 0.0,
        }
    }

    fn origin(&self, k: usize, prev: Option<&Strip>) -> f64 {
        match &self.domain {
            Domain::Cauchy { y_min } => match prev {
                None => *y_min,
                Some(s) if s.k % 2 == 0 => s.y0 - self.l,
                Some(s) => s.y0 + self.l,
            },
            Domain::Wedge { .. } => self.wall_y(k) - 2.0 * self.l * self.cells as f64,
        }
    }

    pub fn initial_strip(&self, theta: f64) -> Result<Strip> {
        let y0 = self.origin(0, None);
        let states: Vec<GasState> = (0..self.cells)
            .map(|m| {
                self.initial
                    .state(y0 + (2 * m + 1) as f64 * self.l + theta * self.l)
            })
            .collect();
        for s in &states {
            s.validate_supersonic(&self.gas)?;
        }
        let post = vec![false; self.cells];
        self.build(0, y0, theta, states.clone(), states, post, None)
    }

    /// Evaluates the Riemann solution of `strip` at `x = x_k + x_rel`,
    /// with the behind-shock tag.
    pub fn state_at(&self, strip: &Strip, x_rel: f64, y: f64) -> Result<(GasState, bool)> {
        let two_l = 2.0 * self.l;
        let n = strip.cells();
        if let Domain::Wedge { .. } = self.domain {
            let (wk, wk1) = (self.wall_y(strip.k), self.wall_y(strip.k + 1));
            let wall = wk + (wk1 - wk) * x_rel / self.h;
            let t = y - wall;
            if t >= -self.l {
                let fan = strip
                    .corner
                    .as_ref()
                    .expect("wedge strip without corner fan");
                let xi = (y - wk) / x_rel;
                return Ok(sample_tagged(fan, xi, strip.post[n - 1], &self.gas)?);
            }
            let i = (n as f64 + (t / two_l).round()).max(0.0) as usize;
            let i = i.min(n - 1);
            if i == 0 {
                return Ok((strip.states[0], strip.post[0]));
            }
            let yi = strip.y0 + two_l * i as f64;
            return sample_tagged(
                &strip.fans[i - 1],
                (y - yi) / x_rel,
                strip.post[i],
                &self.gas,
            );
        }
        let i = ((y - strip.y0) / two_l).round();
        if i <= 0.0 {
            return Ok((strip.states[0], strip.post[0]));
        }
        let i = i as usize;
        if i >= n {
            return Ok((strip.states[n - 1], strip.post[n - 1]));
        }
        let yi = strip.y0 + two_l * i as f64;
        sample_tagged(
            &strip.fans[i - 1],
            (y - yi) / x_rel,
            strip.post[i],
            &self.gas,
        )
    }

    /// Sampling, reaction and Riemann solve for the next strip.
    pub fn advance(&self, strip: &Strip, theta: f64) -> Result<Strip> {
        let k = strip.k + 1;
        let y0 = self.origin(k, Some(strip));
        let sampled: Vec<(GasState, bool)> = (0..self.cells)
            .into_par_iter()
            .map(|m| {
                let y = y0 + (2 * m + 1) as f64 * self.l + theta * self.l;
                self.state_at(strip, self.h, y)
            })
            .collect::<Result<_>>()?;
        let pre: Vec<GasState> = sampled.iter().map(|p| p.0).collect();
        let post: Vec<bool> = sampled.iter().map(|p| p.1).collect();
        let states: Vec<GasState> = pre
            .par_iter()
            .map(|s| react_state(s, self.h, &self.gas, &self.rate))
            .collect::<Result<_>>()?;
        let guess = strip.shock.map(|s| s.1);
        self.build(k, y0, theta, states, pre, post, guess)
    }

    /// Interface fans and wall fan for the given cell states, with the
    /// strong shock track when present.
    #[allow(clippy::type_complexity)]
    pub fn solve_fans(
        &self,
        k: usize,
        y0: f64,
        states: &[GasState],
        post: &[bool],
        slope_guess: Option<f64>,
    ) -> Result<(Vec<WaveFan>, Option<WaveFan>, Option<(f64, f64)>)> {
        let strong = self.is_strong();
        let n = states.len();
        let fans: Vec<WaveFan> = (1..n)
            .into_par_iter()
            .map(|i| {
                let (b, a) = (&states[i - 1], &states[i]);
                if strong && !post[i - 1] && post[i] {
                    let guess = slope_guess.unwrap_or(-1.0);
                    solve_strong(b, a, guess, &self.gas)
                } else {
                    solve_interior(b, a, &self.gas)
                }
            })
            .collect::<Result<_>>()?;
        let two_l = 2.0 * self.l;
        let mut shock = None;
        for (i, f) in fans.iter().enumerate() {
            if let Some(s) = f.strong {
                shock = Some((y0 + two_l * (i + 1) as f64, s));
            }
        }
        let corner = if self.is_wedge() {
            let mut fan = solve_lateral(
                &states[n - 1],
                self.wall_angle(k),
                WallSide::Above,
                &self.gas,
            )?;
            if strong && !post[n - 1] {
                let slope = fan.waves.first().map(|w| w.slope_lo).ok_or_else(|| {
                    GlimmError::InvalidState("strong vertex produced no shock".into())
                })?;
                fan.strengths[0] = 0.0;
                fan.strong = Some(slope);
                shock = Some((self.wall_y(k), slope));
            }
            Some(fan)
        } else {
            None
        };
        Ok((fans, corner, shock))
    }

    /// Solves the interface and wall problems of a strip.
    #[allow(clippy::too_many_arguments)]
    fn build(
        &self,
        k: usize,
        y0: f64,
        theta: f64,
        states: Vec<GasState>,
        pre_states: Vec<GasState>,
        post: Vec<bool>,
        slope_guess: Option<f64>,
    ) -> Result<Strip> {
        let n = states.len();
        let x = k as f64 * self.h;
        let (fans, corner, shock) = self.solve_fans(k, y0, &states, &post, slope_guess)?;

        let bound = self.cfl_bound() * (1.0 + 1e-12);
        for f in fans.iter().chain(corner.iter()) {
            let speed = f.max_speed();
            if speed > bound {
                return Err(GlimmError::Cfl {
                    strip: k,
                    speed,
                    bound: self.cfl_bound(),
                });
            }
        }
        if self.check_window && !self.is_wedge() && n > 2 {
            if !fans[0].is_trivial() || !fans[n - 2].is_trivial() {
                return Err(GlimmError::WindowTooNarrow(k));
            }
        }
        Ok(Strip {
            k,
            x,
            y0,
            theta,
            states,
            pre_states,
            post,
            fans,
            corner,
            shock,
        })
    }

    /// Position of cell `m`'s center in strip `strip`.
    pub fn cell_center(&self, strip: &Strip, m: usize) -> f64 {
        strip.y0 + (2 * m + 1) as f64 * self.l
    }

    /// Sample point of cell `m` in `strip`.
    pub fn sample_point(&self, strip: &Strip, m: usize) -> f64 {
        self.cell_center(strip, m) + strip.theta * self.l
    }

    /// Lower edges of the interfaces: position of interface `i`.
    pub fn interface_y(&self, strip: &Strip, i: usize) -> f64 {
        strip.y0 + 2.0 * self.l * i as f64
    }
}

fn sample_tagged(
    fan: &WaveFan,
    xi: f64,
    tag_above: bool,
    gas: &GasConstants,
) -> Result<(GasState, bool)> {
    let s = fan.sample(xi, gas)?;
    let tag = match fan.strong {
        Some(slope) => xi >= slope,
        None => tag_above,
    };
    Ok((s, tag))
}
