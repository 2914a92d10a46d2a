//! Glimm functional `F = L + K Q` over the waves crossing a mesh curve,
//! and the per-diamond interaction ledger.

use serde::Serialize;

use crate::error::Result;
use crate::riemann::WaveFan;
use crate::scheme::{Scheme, Strip};
use crate::waves::{WaveKind, NEGLIGIBLE};

/// One weak wave (or a piece of a rarefaction) crossing a mesh curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveRecord {
    /// Identifies the Riemann problem that produced the wave.
    pub fan: usize,
    pub family: usize,
    pub strength: f64,
    pub shock: bool,
    pub y_lo: f64,
    pub y_hi: f64,
}

/// True when `upper` (located above) and `lower` approach each other.
pub fn approaching(upper: &WaveRecord, lower: &WaveRecord) -> bool {
    let (i, j) = (upper.family, lower.family);
    i < j || (i == j && (i == 1 || i == 5) && (upper.shock || lower.shock))
}

/// Weights of the linear part of the functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weights {
    /// Weight `M` on the family 4 term.
    pub m: f64,
    /// Coefficient `K` of the quadratic term.
    pub k: f64,
    /// Boundary weight `K*`; `None` for the Cauchy functional.
    pub k_star: Option<f64>,
}

impl Weights {
    pub fn family(&self, j: usize) -> f64 {
        let base = if j == 4 { self.m } else { 1.0 };
        match self.k_star {
            Some(ks) if j != 1 => ks * base,
            _ => base,
        }
    }

    pub fn corner(&self) -> f64 {
        self.k_star.unwrap_or(0.0)
    }
}

/// Strength sums by family, all waves and shocks only.
#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    all: [f64; 6],
    shock: [f64; 6],
}

impl Sums {
    fn add(&mut self, w: &WaveRecord, sign: f64) {
        let a = w.strength.abs() * sign;
        self.all[w.family] += a;
        if w.shock {
            self.shock[w.family] += a;
        }
    }

    /// `sum |b|` over members `b` that approach `w` when `w` lies above.
    fn partners_below(&self, w: &WaveRecord) -> f64 {
        let i = w.family;
        let mut s: f64 = self.all[i + 1..].iter().sum();
        if i == 1 || i == 5 {
            s += if w.shock { self.all[i] } else { self.shock[i] };
        }
        s
    }

    /// `sum |a|` over members `a` that approach `w` when `w` lies below.
    fn partners_above(&self, w: &WaveRecord) -> f64 {
        let j = w.family;
        let mut s: f64 = self.all[1..j].iter().sum();
        if j == 1 || j == 5 {
            s += if w.shock { self.all[j] } else { self.shock[j] };
        }
        s
    }
}

/// Approaching pairs among `waves` (sorted upward), counting only pairs
/// from different fans.
pub fn quadratic(waves: &[WaveRecord]) -> f64 {
    let mut above = Sums::default();
    let mut q = 0.0;
    let mut i = waves.len();
    while i > 0 {
        let fan = waves[i - 1].fan;
        let mut j = i;
        while j > 0 && waves[j - 1].fan == fan {
            j -= 1;
        }
        for w in &waves[j..i] {
            q += w.strength.abs() * above.partners_above(w);
        }
        for w in &waves[j..i] {
            above.add(w, 1.0);
        }
        i = j;
    }
    q
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalReport {
    /// `L_i`, family 1 first.
    pub l_family: [f64; 5],
    /// Weighted linear part, including the corner term.
    pub l: f64,
    pub q: f64,
    pub f: f64,
    /// Sum of wall turning angles not yet crossed.
    pub l0: f64,
}

pub fn functional(waves: &[WaveRecord], w: &Weights, l0: f64) -> FunctionalReport {
    let mut lf = [0.0; 5];
    for r in waves {
        lf[r.family - 1] += r.strength.abs();
    }
    let l = w.corner() * l0 + (1..=5).map(|j| w.family(j) * lf[j - 1]).sum::<f64>();
    let q = quadratic(waves);
    FunctionalReport {
        l_family: lf,
        l,
        q,
        f: l + w.k * q,
        l0,
    }
}

fn push_fan(out: &mut Vec<WaveRecord>, fan: &WaveFan, id: usize, y: f64, dx: f64) {
    for g in &fan.waves {
        if fan.strong.is_some() && g.family == 1 {
            continue;
        }
        let s = if fan.strong.is_some() {
            fan.strengths[g.family - 1]
        } else {
            g.strength
        };
        if s.abs() <= NEGLIGIBLE {
            continue;
        }
        out.push(WaveRecord {
            fan: id,
            family: g.family,
            strength: s,
            shock: g.kind == WaveKind::Shock,
            y_lo: y + g.slope_lo * dx,
            y_hi: y + g.slope_hi * dx,
        });
    }
}

/// Weak waves of a strip, with their positions at `x_k + dx`, ordered
/// upward. The interface fan at index `i` has id `i`; the corner fan has
/// id `cells`.
pub fn fan_waves(
    scheme: &Scheme,
    strip: &Strip,
    fans: &[WaveFan],
    corner: Option<&WaveFan>,
    dx: f64,
) -> Vec<WaveRecord> {
    let mut out = Vec::new();
    for (i, f) in fans.iter().enumerate() {
        push_fan(&mut out, f, i + 1, scheme.interface_y(strip, i + 1), dx);
    }
    if let Some(c) = corner {
        push_fan(&mut out, c, strip.cells(), scheme.wall_y(strip.k), dx);
    }
    out
}

pub fn strip_waves(scheme: &Scheme, strip: &Strip, dx: f64) -> Vec<WaveRecord> {
    fan_waves(scheme, strip, &strip.fans, strip.corner.as_ref(), dx)
}

/// Sum of `|omega_j|` over corners `j > k`.
pub fn corners_ahead(scheme: &Scheme, k: usize, strips: usize) -> f64 {
    if !scheme.is_wedge() {
        return 0.0;
    }
    (k + 1..=strips).map(|j| scheme.wall_turn(j).abs()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiamondReport {
    /// Sum of the interaction potentials `E(Lambda)` over the strip.
    pub e_total: f64,
    /// Largest `(F(J) - F(I) + E/4) / F(I)` over the diamonds.
    pub worst_excess: f64,
    /// Functional after all replacements; equals `F` on the next curve.
    pub f_end: f64,
}

/// Replaces the waves between consecutive sample points of `next` one
/// diamond at a time, bottom to top, and tracks `F`.
#[allow(clippy::too_many_arguments)]
pub fn diamond_ledger(
    scheme: &Scheme,
    old: &Strip,
    next: &Strip,
    next_fans: &[WaveFan],
    next_corner: Option<&WaveFan>,
    w: &Weights,
    l0_old: f64,
    strips: usize,
) -> Result<DiamondReport> {
    let h = scheme.h;
    let n = next.cells();
    let samples: Vec<f64> = (0..n).map(|m| scheme.sample_point(next, m)).collect();

    // Old waves at x_{k+1}, rarefactions split at sample points.
    let mut groups: Vec<Vec<WaveRecord>> = vec![Vec::new(); n + 1];
    for r in strip_waves(scheme, old, h) {
        let mut lo = r.y_lo;
        let hi = r.y_hi;
        let mut d = samples.partition_point(|s| *s < lo);
        if r.shock || hi == lo || r.family != 1 && r.family != 5 {
            let d = samples.partition_point(|s| *s < 0.5 * (lo + hi));
            groups[d].push(r);
            continue;
        }
        while lo < hi {
            let cut = if d < n { samples[d].min(hi) } else { hi };
            if cut > lo {
                groups[d].push(WaveRecord {
                    strength: (cut - lo) / h,
                    y_lo: lo,
                    y_hi: cut,
                    ..r
                });
            }
            lo = cut;
            d += 1;
        }
    }

    let mut new_waves: Vec<Vec<WaveRecord>> = vec![Vec::new(); n + 1];
    for r in fan_waves(scheme, next, next_fans, next_corner, 0.0) {
        // Interface fan i sits between samples i-1 and i; corner above.
        new_waves[r.fan.min(n)].push(r);
    }

    let lin = |ws: &[WaveRecord]| {
        ws.iter()
            .map(|r| w.family(r.family) * r.strength.abs())
            .sum::<f64>()
    };
    let all_old: Vec<WaveRecord> = groups.iter().flatten().copied().collect();
    let mut f_cur = functional(&all_old, w, l0_old).f;
    let mut above = Sums::default();
    for r in &all_old {
        above.add(r, 1.0);
    }
    let mut below = Sums::default();
    let mut e_total = 0.0;
    let mut worst = f64::NEG_INFINITY;
    let turn_next = if scheme.is_wedge() && next.k <= strips {
        scheme.wall_turn(next.k).abs()
    } else {
        0.0
    };
    for d in 0..=n {
        let grp = &groups[d];
        let fresh = &new_waves[d];
        for r in grp {
            above.add(r, -1.0);
        }
        let rest = |ws: &[WaveRecord]| {
            ws.iter()
                .map(|r| r.strength.abs() * (below.partners_below(r) + above.partners_above(r)))
                .sum::<f64>()
        };
        let q_lambda = quadratic(grp);
        let corner = d == n && scheme.is_wedge();
        let mut df = lin(fresh) - lin(grp) + w.k * (rest(fresh) - rest(grp) - q_lambda);
        let e = if corner {
            df -= w.corner() * turn_next;
            turn_next
                + grp
                    .iter()
                    .filter(|r| r.family >= 2)
                    .map(|r| r.strength.abs())
                    .sum::<f64>()
        } else {
            q_lambda
        };
        if !(grp.is_empty() && fresh.is_empty() && e == 0.0) {
            let excess = (df + 0.25 * e) / f_cur.max(f64::MIN_POSITIVE);
            worst = worst.max(excess);
        }
        e_total += e;
        f_cur += df;
        for r in fresh {
            below.add(r, 1.0);
        }
    }
    Ok(DiamondReport {
        e_total,
        worst_excess: if worst.is_finite() { worst } else { 0.0 },
        f_end: f_cur,
    })
}

#[cfg(test)]
mod test {
    use super::*;

    fn rec(fan: usize, family: usize, strength: f64) -> WaveRecord {
        WaveRecord {
            fan,
            family,
            strength,
            shock: strength < 0.0 && (family == 1 || family == 5),
            y_lo: fan as f64,
            y_hi: fan as f64,
        }
    }

    #[test]
    fn predicate_cases() {
        // 5-wave below a 1-wave approach; the reverse does not.
        assert!(approaching(&rec(2, 1, 0.1), &rec(1, 5, 0.1)));
        assert!(!approaching(&rec(2, 5, 0.1), &rec(1, 1, 0.1)));
        // Same acoustic family: only if a shock is involved.
        assert!(!approaching(&rec(2, 1, 0.1), &rec(1, 1, 0.1)));
        assert!(approaching(&rec(2, 1, -0.1), &rec(1, 1, 0.1)));
        assert!(!approaching(&rec(2, 3, 0.1), &rec(1, 3, 0.1)));
    }

    #[test]
    fn quadratic_matches_pairwise_sum() {
        let waves = vec![
            rec(1, 1, -0.02),
            rec(1, 5, 0.03),
            rec(2, 1, 0.01),
            rec(2, 3, -0.04),
            rec(2, 5, -0.02),
            rec(3, 1, -0.05),
            rec(3, 4, 0.02),
        ];
        let mut direct = 0.0;
        for (a, up) in waves.iter().enumerate() {
            for lo in &waves[..a] {
                if up.fan != lo.fan && approaching(up, lo) {
                    direct += up.strength.abs() * lo.strength.abs();
                }
            }
        }
        assert!((quadratic(&waves) - direct).abs() < 1e-15);
    }

    #[test]
    fn weights_by_mode() {
        let c = Weights {
            m: 2.0,
            k: 10.0,
            k_star: None,
        };
        assert_eq!(c.family(4), 2.0);
        assert_eq!(c.family(5), 1.0);
        let wdg = Weights {
            m: 1.0,
            k: 10.0,
            k_star: Some(3.0),
        };
        assert_eq!(wdg.family(1), 1.0);
        assert_eq!(wdg.family(2), 3.0);
        let r = functional(&[rec(1, 2, 0.1)], &wdg, 0.5);
        assert!((r.l - (3.0 * 0.5 + 0.3)).abs() < 1e-15);
    }
}
