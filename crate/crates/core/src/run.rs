//! Strip-by-strip driver collecting fields and diagnostics.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagnostics::asymptotics::{
    asymptotics, classify, deviation, AsymptoticReport, StripAsymptotics,
};
use crate::diagnostics::entropy::entropy_residual;
use crate::diagnostics::functional::{
    corners_ahead, diamond_ledger, fan_waves, strip_waves, DiamondReport,
};
use crate::diagnostics::survey::boundary_coefficients;
use crate::diagnostics::{functional, total_variation, FunctionalReport, Weights};
use crate::error::Result;
use crate::reaction::decay_rate;
use crate::riemann::{oblique_shock_polar, solve_lateral, WallSide};
use crate::sampler::{Sampler, SamplerKind};
use crate::scheme::{Domain, Scheme, Strip};
use crate::thermo::{entropy, sonic_speed, temperature, GasState};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub strips: usize,
    pub sampler: SamplerKind,
    pub seed: u64,
    /// Weight on family 4 in `L`.
    pub m_weight: f64,
    /// `K_0`; chosen from the initial data when `None`.
    pub k0: Option<f64>,
    /// Corner weight for wedge runs; fitted when `None`.
    pub k_star: Option<f64>,
    pub c_star: f64,
    pub entropy: bool,
    pub diamonds: bool,
    /// Keep every `field_stride`-th strip (and the last); 0 keeps none.
    pub field_stride: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            strips: 100,
            sampler: SamplerKind::VanDerCorput,
            seed: 0,
            m_weight: 1.0,
            k0: None,
            k_star: None,
            c_star: 1.0,
            entropy: false,
            diamonds: true,
            field_stride: 0,
        }
    }
}

/// One line of the per-strip diagnostics table.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DiagnosticsRow {
    pub k: usize,
    pub x: f64,
    pub theta: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub l5: f64,
    pub l: f64,
    pub q: f64,
    pub f: f64,
    /// Functional of the strip before its reaction step.
    pub f_pre: f64,
    pub l0: f64,
    pub f_s: Option<f64>,
    pub shock_y: Option<f64>,
    pub shock_slope: Option<f64>,
    pub tv_u: f64,
    pub tv_v: f64,
    pub tv_p: f64,
    pub tv_rho: f64,
    pub tv_z: f64,
    pub max_z: f64,
    /// Residual over the slab ending at this strip.
    pub entropy_residual: Option<f64>,
    pub e_sum: f64,
    pub diamond_excess: Option<f64>,
    pub sup_dev: f64,
    pub angle_above: Option<f64>,
    pub angle_below: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FieldRow {
    pub k: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub rho: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub c: f64,
    #[serde(rename = "Mach")]
    pub mach: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub strips: usize,
    pub weights: Weights,
    pub c_star: f64,
    /// Background strong-shock slope.
    pub s_star: Option<f64>,
    /// `min phi(T)/u` over all states of the run.
    pub decay_rate: f64,
    pub z0_max: f64,
    pub w5_max: f64,
    /// Largest `(F - F_pre) / (h |w5|_inf exp(-Phi_1 k h) (F_pre + 1)^2)`.
    pub growth_constant: f64,
    /// The same over the first and second half of the run.
    pub growth_first_half: f64,
    pub growth_second_half: f64,
    pub f0: f64,
    pub f_max: f64,
    /// Largest `(F(J_{k+1}) - F(J_k)) / F(J_k)`.
    pub worst_increase: f64,
    pub worst_diamond_excess: Option<f64>,
    pub e_total: f64,
    pub max_entropy_residual: Option<f64>,
    /// Largest scaled Rankine-Hugoniot residual of any shock in any fan.
    pub max_rh_residual: f64,
    /// Largest `max Z(k) / (|Z_0|_inf exp(-Phi_1 k h))`.
    pub z_envelope_ratio: f64,
    pub limit_state: GasState,
    pub asymptotics: AsymptoticReport,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub rows: Vec<DiagnosticsRow>,
    pub field: Vec<FieldRow>,
    pub summary: RunSummary,
    pub last: Strip,
}

pub fn field_rows(scheme: &Scheme, strip: &Strip) -> Vec<FieldRow> {
    let g = &scheme.gas;
    strip
        .states
        .iter()
        .enumerate()
        .map(|(j, s)| FieldRow {
            k: strip.k,
            j,
            x: strip.x,
            y: scheme.cell_center(strip, j),
            u: s.u,
            v: s.v,
            p: s.p,
            rho: s.rho,
            z: s.z,
            t: temperature(s, g),
            c: sonic_speed(s, g),
            mach: s.mach(g),
            s: entropy(s, g),
        })
        .collect()
}

/// State the flow approaches far downstream along the wall.
pub fn limit_state(scheme: &Scheme, strips: usize) -> Result<GasState> {
    match &scheme.domain {
        Domain::Cauchy { .. } => Ok(scheme.initial.far_field),
        Domain::Wedge { strong: false, .. } => {
            let fan = solve_lateral(
                &scheme.initial.far_field,
                scheme.wall_angle(strips),
                WallSide::Above,
                &scheme.gas,
            )?;
            Ok(*fan.above())
        }
        Domain::Wedge { strong: true, .. } => {
            let far = &scheme.initial.far_field;
            Ok(oblique_shock_polar(
                far,
                far.flow_angle() - scheme.wall_angle(strips),
                &scheme.gas,
            )?
            .0)
        }
    }
}

struct Ctx<'a> {
    scheme: &'a Scheme,
    strips: usize,
    weights: Weights,
    c_star: f64,
    s_star: Option<f64>,
    limit: GasState,
}

impl Ctx<'_> {
    fn report(&self, strip: &Strip) -> FunctionalReport {
        let waves = strip_waves(self.scheme, strip, 0.0);
        functional(
            &waves,
            &self.weights,
            corners_ahead(self.scheme, strip.k, self.strips),
        )
    }

    fn pre_report(&self, strip: &Strip, guess: Option<f64>) -> Result<FunctionalReport> {
        if !strip.reacted() {
            return Ok(self.report(strip));
        }
        let (fans, corner, _) =
            self.scheme
                .solve_fans(strip.k, strip.y0, &strip.pre_states, &strip.post, guess)?;
        let waves = fan_waves(self.scheme, strip, &fans, corner.as_ref(), 0.0);
        Ok(functional(
            &waves,
            &self.weights,
            corners_ahead(self.scheme, strip.k, self.strips),
        ))
    }

    fn asymptotic(&self, strip: &Strip, rep: &FunctionalReport) -> StripAsymptotics {
        let sc = self.scheme;
        let mut out = StripAsymptotics {
            l_family: rep.l_family,
            ..Default::default()
        };
        let far = &sc.initial.far_field;
        if sc.is_strong() {
            let wall = sc.wall_angle(self.strips);
            let (mut above, mut below) = (None::<f64>, None::<f64>);
            for (s, &post) in strip.states.iter().zip(&strip.post) {
                let (reference, slot, angle) = if post {
                    (&self.limit, &mut above, wall)
                } else {
                    (far, &mut below, far.flow_angle())
                };
                out.sup_dev = out.sup_dev.max(deviation(s, reference));
                let d = (s.flow_angle() - angle).abs();
                *slot = Some(slot.map_or(d, |m| m.max(d)));
            }
            out.angle_above = above;
            out.angle_below = below;
        } else {
            out.sup_dev = strip
                .states
                .iter()
                .map(|s| deviation(s, &self.limit))
                .fold(0.0, f64::max);
        }
        out
    }

    fn row(
        &self,
        strip: &Strip,
        rep: &FunctionalReport,
        f_pre: f64,
        asym: &StripAsymptotics,
    ) -> DiagnosticsRow {
        let tv = total_variation(&strip.states);
        let f_s = match (strip.shock, self.s_star) {
            (Some((_, s)), Some(s_star)) => Some((s - s_star).abs() + self.c_star * rep.f),
            _ => None,
        };
        DiagnosticsRow {
            k: strip.k,
            x: strip.x,
            theta: strip.theta,
            l1: rep.l_family[0],
            l2: rep.l_family[1],
            l3: rep.l_family[2],
            l4: rep.l_family[3],
            l5: rep.l_family[4],
            l: rep.l,
            q: rep.q,
            f: rep.f,
            f_pre,
            l0: rep.l0,
            f_s,
            shock_y: strip.shock.map(|s| s.0),
            shock_slope: strip.shock.map(|s| s.1),
            tv_u: tv[0],
            tv_v: tv[1],
            tv_p: tv[2],
            tv_rho: tv[3],
            tv_z: tv[4],
            max_z: strip.states.iter().map(|s| s.z).fold(0.0, f64::max),
            entropy_residual: None,
            e_sum: 0.0,
            diamond_excess: None,
            sup_dev: asym.sup_dev,
            angle_above: asym.angle_above,
            angle_below: asym.angle_below,
        }
    }
}

/// Runs `opts.strips` strips of `scheme`.
pub fn run(scheme: &Scheme, opts: &RunOptions) -> Result<RunResult> {
    let started = Instant::now();
    let strips = opts.strips;
    let mut sampler = Sampler::new(opts.sampler, opts.seed);
    let mut strip = scheme.initial_strip(sampler.next_theta())?;

    let far = scheme.initial.far_field;
    // Unweighted size of the data: wave mass plus total wall turning.
    let eps_tv = {
        let unit = Weights {
            m: opts.m_weight,
            k: 0.0,
            k_star: scheme.is_wedge().then_some(1.0),
        };
        functional(
            &strip_waves(scheme, &strip, 0.0),
            &unit,
            corners_ahead(scheme, 0, strips) + scheme.wall_turn(0).abs(),
        )
        .l
    };
    let k0 = opts.k0.unwrap_or(if eps_tv > 0.0 {
        (10.0 / eps_tv).max(1.0)
    } else {
        1.0
    });
    let k_star = if scheme.is_wedge() {
        Some(match opts.k_star {
            Some(k) => k,
            None => {
                let aligned = GasState {
                    u: far.speed() * scheme.wall_angle(0).cos(),
                    v: far.speed() * scheme.wall_angle(0).sin(),
                    ..far
                };
                let kb = boundary_coefficients(&aligned, 1e-4, &scheme.gas)?.max_abs();
                // Covers the growth of Q caused by reflected waves.
                (kb + 1.0) * (1.0 + 2.0 * k0 * kb * eps_tv)
            }
        })
    } else {
        None
    };
    let s_star = if scheme.is_strong() {
        Some(oblique_shock_polar(&far, far.flow_angle() - scheme.wall_angle(0), &scheme.gas)?.1)
    } else {
        None
    };
    let ctx = Ctx {
        scheme,
        strips,
        weights: Weights {
            m: opts.m_weight,
            k: k0,
            k_star,
        },
        c_star: opts.c_star,
        s_star,
        limit: limit_state(scheme, strips)?,
    };

    let mut rows = Vec::with_capacity(strips + 1);
    let mut field = Vec::new();
    let mut asym = Vec::with_capacity(strips + 1);
    let mut trace = Vec::new();
    let keep = |k: usize| opts.field_stride > 0 && (k % opts.field_stride == 0 || k == strips);

    let rep0 = ctx.report(&strip);
    let a0 = ctx.asymptotic(&strip, &rep0);
    rows.push(ctx.row(&strip, &rep0, rep0.f, &a0));
    asym.push(a0);
    if keep(0) {
        field.extend(field_rows(scheme, &strip));
    }
    if scheme.is_wedge() {
        trace.push(strip.states[strip.cells() - 1]);
    }
    let (mut t_min, mut u_max) = (f64::INFINITY, 0.0f64);
    let mut track = |s: &Strip| {
        for st in s.states.iter().chain(&s.pre_states) {
            t_min = t_min.min(temperature(st, &scheme.gas));
            u_max = u_max.max(st.u);
        }
    };
    track(&strip);
    let rh_of = |s: &Strip| {
        s.fans
            .iter()
            .chain(&s.corner)
            .flat_map(|f| f.rh_residuals(&scheme.gas))
            .fold(0.0, f64::max)
    };
    let mut max_rh = rh_of(&strip);
    let z0_max = strip.states.iter().map(|s| s.z).fold(0.0, f64::max);
    let w5_max = strip
        .states
        .iter()
        .map(|s| s.rho * s.u * s.z)
        .fold(0.0, f64::max);

    let mut e_sum = 0.0;
    let mut worst_increase = f64::NEG_INFINITY;
    let mut worst_diamond = None::<f64>;
    let mut worst_entropy = None::<f64>;
    let mut growth = Vec::with_capacity(strips);
    let mut prev_f = rep0.f;
    for _ in 0..strips {
        let theta = sampler.next_theta();
        let next = scheme.advance(&strip, theta)?;
        track(&next);
        max_rh = max_rh.max(rh_of(&next));
        let guess = strip.shock.map(|s| s.1);
        let rep = ctx.report(&next);
        let pre = ctx.pre_report(&next, guess)?;
        let a = ctx.asymptotic(&next, &rep);
        let mut row = ctx.row(&next, &rep, pre.f, &a);

        let (diamond, ent) = rayon::join(
            || -> Result<Option<DiamondReport>> {
                if !opts.diamonds {
                    return Ok(None);
                }
                let (fans, corner) = if next.reacted() {
                    let (f, c, _) =
                        scheme.solve_fans(next.k, next.y0, &next.pre_states, &next.post, guess)?;
                    (f, c)
                } else {
                    (next.fans.clone(), next.corner.clone())
                };
                let l0_old = corners_ahead(scheme, strip.k, strips);
                diamond_ledger(
                    scheme,
                    &strip,
                    &next,
                    &fans,
                    corner.as_ref(),
                    &ctx.weights,
                    l0_old,
                    strips,
                )
                .map(Some)
            },
            || -> Result<Option<f64>> {
                if opts.entropy {
                    entropy_residual(scheme, &strip, &next).map(Some)
                } else {
                    Ok(None)
                }
            },
        );
        if let Some(d) = diamond? {
            e_sum += d.e_total;
            row.diamond_excess = Some(d.worst_excess);
            worst_diamond = Some(worst_diamond.map_or(d.worst_excess, |w| w.max(d.worst_excess)));
        }
        row.e_sum = e_sum;
        if let Some(r) = ent? {
            row.entropy_residual = Some(r);
            worst_entropy = Some(worst_entropy.map_or(r, |w| w.max(r)));
        }
        if prev_f > 0.0 {
            worst_increase = worst_increase.max((rep.f - prev_f) / prev_f);
        } else if rep.f > 0.0 {
            worst_increase = f64::INFINITY;
        }
        prev_f = rep.f;
        growth.push((next.k, rep.f - pre.f, pre.f));
        rows.push(row);
        asym.push(a);
        if keep(next.k) {
            field.extend(field_rows(scheme, &next));
        }
        if scheme.is_wedge() {
            trace.push(next.states[next.cells() - 1]);
        }
        strip = next;
    }

    let phi1 = decay_rate(&scheme.rate, t_min, u_max, &scheme.gas);
    let envelope = |k: usize, f_pre: f64| {
        scheme.h * w5_max * (-phi1 * k as f64 * scheme.h).exp() * (f_pre + 1.0).powi(2)
    };
    let ratios: Vec<f64> = growth
        .iter()
        .map(|&(k, df, f_pre)| {
            let e = envelope(k, f_pre);
            if df <= 0.0 {
                0.0
            } else if e > 0.0 {
                df / e
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let half = ratios.len() / 2;
    let max_of = |s: &[f64]| s.iter().copied().fold(0.0, f64::max);
    let z_envelope_ratio = rows
        .iter()
        .map(|r| {
            let env = z0_max * (-phi1 * r.x).exp();
            if env > 0.0 {
                r.max_z / env
            } else if r.max_z > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    let case = match scheme.domain {
        Domain::Wedge { .. } => classify(Some(
            (scheme.wall_y(strips + 1) - scheme.wall_y(strips)) / scheme.h,
        )),
        Domain::Cauchy { .. } => classify(None),
    };
    let summary = RunSummary {
        strips,
        weights: ctx.weights,
        c_star: opts.c_star,
        s_star,
        decay_rate: phi1,
        z0_max,
        w5_max,
        growth_constant: max_of(&ratios),
        growth_first_half: max_of(&ratios[..half]),
        growth_second_half: max_of(&ratios[half..]),
        f0: rows[0].f,
        f_max: rows.iter().map(|r| r.f).fold(0.0, f64::max),
        worst_increase: if worst_increase.is_finite() || worst_increase > 0.0 {
            worst_increase
        } else {
            0.0
        },
        worst_diamond_excess: worst_diamond,
        e_total: e_sum,
        max_entropy_residual: worst_entropy,
        max_rh_residual: max_rh,
        z_envelope_ratio,
        limit_state: ctx.limit,
        asymptotics: asymptotics(&asym, case, &trace),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    Ok(RunResult {
        rows,
        field,
        summary,
        last: strip,
    })
}

/// Parallel helper for callers running independent configurations.
pub fn run_many(jobs: &[(Scheme, RunOptions)]) -> Vec<Result<RunResult>> {
    jobs.par_iter().map(|(s, o)| run(s, o)).collect()
}
