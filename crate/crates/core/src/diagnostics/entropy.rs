//! Discrete entropy residual over one strip, tested against tent
//! functions `psi(y) = max(0, 1 - |y - c| / 2l)` at the cell centers.
//!
//! `R = int psi eta(x_{k+1}) - int psi eta(x_k) - int int (q psi' + S psi)`
//! with `eta = -rho u S`, `q = -rho v S`, `S` the reaction source of
//! `eta`. The entropy condition asks `R <= 0` up to the sampling error.

use crate::error::Result;
use crate::scheme::{Scheme, Strip};
use crate::thermo::{entropy_pair, entropy_source, GasState};

const GAUSS4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];

/// `int_a^b max(0, 1 - |y - c| / w) dy`.
pub fn tent_integral(c: f64, w: f64, a: f64, b: f64) -> f64 {
    // Antiderivative of the tent, zero at c - w.
    let prim = |y: f64| {
        let t = ((y - c) / w).clamp(-1.0, 1.0);
        if t <= 0.0 {
            w * 0.5 * (1.0 + t) * (1.0 + t)
        } else {
            w * (1.0 - 0.5 * (1.0 - t) * (1.0 - t))
        }
    };
    if b <= a {
        0.0
    } else {
        prim(b) - prim(a)
    }
}

fn eta_integral(scheme: &Scheme, strip: &Strip, c: f64, w: f64) -> f64 {
    let two_l = 2.0 * scheme.l;
    strip
        .states
        .iter()
        .enumerate()
        .map(|(m, s)| {
            let a = strip.y0 + two_l * m as f64;
            let wt = tent_integral(c, w, a, a + two_l);
            if wt == 0.0 {
                0.0
            } else {
                wt * entropy_pair(s, &scheme.gas).0
            }
        })
        .sum()
}

/// Largest positive residual over the interior tents of the strip pair.
/// Tents within two cells of a window edge (or of the wall) are skipped.
pub fn entropy_residual(scheme: &Scheme, old: &Strip, new: &Strip) -> Result<f64> {
    let (l, h) = (scheme.l, scheme.h);
    let w = 2.0 * l;
    let n = old.cells();
    let top_skip = if scheme.is_wedge() { 3 } else { 2 };
    if n <= top_skip + 2 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for m in 2..n - top_skip {
        let c = scheme.cell_center(old, m);
        let mut r = eta_integral(scheme, new, c, w) - eta_integral(scheme, old, c, w);
        // Four sub-intervals of width l on which psi is linear.
        for q in 0..4 {
            let (ya, yb) = (c - w + l * q as f64, c - w + l * (q + 1) as f64);
            let slope = if q < 2 { 1.0 / w } else { -1.0 / w };
            for (gx, wx) in GAUSS4 {
                let x = 0.5 * h * (1.0 + gx);
                for (gy, wy) in GAUSS4 {
                    let y = 0.5 * (ya + yb) + 0.5 * l * gy;
                    let s: GasState = scheme.state_at(old, x, y)?.0;
                    let psi = 1.0 - (y - c).abs() / w;
                    let flux = entropy_pair(&s, &scheme.gas).1;
                    let src = entropy_source(&s, &scheme.gas, &scheme.rate);
                    r -= 0.25 * h * l * wx * wy * (flux * slope + src * psi);
                }
            }
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn tent_integrals() {
        assert!((tent_integral(0.0, 2.0, -5.0, 5.0) - 2.0).abs() < 1e-15);
        assert!((tent_integral(0.0, 2.0, 0.0, 5.0) - 1.0).abs() < 1e-15);
        assert!((tent_integral(0.0, 2.0, -1.0, 1.0) - 1.5).abs() < 1e-15);
        assert!((tent_integral(1.0, 2.0, 2.0, 3.0) - 0.25).abs() < 1e-15);
        assert_eq!(tent_integral(0.0, 1.0, 2.0, 3.0), 0.0);
    }
}
