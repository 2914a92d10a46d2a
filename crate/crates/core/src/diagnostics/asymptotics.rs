//! Downstream behavior: decay of weak-wave mass and of the deviation from
//! the predicted limit pattern.

use serde::Serialize;

use crate::thermo::GasState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeSign {
    /// `|g'(inf)| < 1e-8`.
    Zero,
    Positive,
    Negative,
    /// Not a wedge run.
    None,
}

pub fn classify(final_slope: Option<f64>) -> SlopeSign {
    match final_slope {
        None => SlopeSign::None,
        Some(s) if s.abs() < 1e-8 => SlopeSign::Zero,
        Some(s) if s > 0.0 => SlopeSign::Positive,
        Some(_) => SlopeSign::Negative,
    }
}

/// Scaled distance between two states.
pub fn deviation(s: &GasState, reference: &GasState) -> f64 {
    let q = reference.speed();
    [
        (s.u - reference.u).abs() / q,
        (s.v - reference.v).abs() / q,
        (s.p - reference.p).abs() / reference.p,
        (s.rho - reference.rho).abs() / reference.rho,
        (s.z - reference.z).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Per-strip inputs.
#[derive(Debug, Clone, Copy, Default)]
pub struct StripAsymptotics {
    pub l_family: [f64; 5],
    pub sup_dev: f64,
    /// Largest flow-angle deviation behind (above) the strong shock.
    pub angle_above: Option<f64>,
    /// Largest flow-angle deviation ahead of (below) the strong shock.
    pub angle_below: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarterPair {
    pub first: f64,
    pub last: f64,
}

impl QuarterPair {
    pub fn decayed(&self, factor: f64) -> bool {
        self.last < factor * self.first || self.first == 0.0 && self.last == 0.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub case: SlopeSign,
    pub sup_dev: QuarterPair,
    /// Families 2 to 5.
    pub l_family: [QuarterPair; 4],
    pub angle_above: Option<QuarterPair>,
    pub angle_below: Option<QuarterPair>,
    /// Total variation in `x` of the trace along the wall.
    pub boundary_tv: Option<f64>,
}

fn quarters(vals: &[f64]) -> QuarterPair {
    let n = vals.len();
    let q = (n / 4).max(1).min(n);
    let mean = |s: &[f64]| {
        if s.is_empty() {
            0.0
        } else {
            s.iter().sum::<f64>() / s.len() as f64
        }
    };
    QuarterPair {
        first: mean(&vals[..q]),
        last: mean(&vals[n - q..]),
    }
}

pub fn asymptotics(
    rows: &[StripAsymptotics],
    case: SlopeSign,
    boundary: &[GasState],
) -> AsymptoticReport {
    let col = |f: &dyn Fn(&StripAsymptotics) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let l_family = [1, 2, 3, 4].map(|i| quarters(&col(&|r| r.l_family[i])));
    let opt = |f: &dyn Fn(&StripAsymptotics) -> Option<f64>| {
        let v: Vec<f64> = rows.iter().filter_map(f).collect();
        (!v.is_empty()).then(|| quarters(&v))
    };
    let boundary_tv = (!boundary.is_empty()).then(|| {
        boundary
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].as_array(), w[1].as_array());
                (0..5).map(|i| (b[i] - a[i]).abs()).sum::<f64>()
            })
            .sum()
    });
    AsymptoticReport {
        case,
        sup_dev: quarters(&col(&|r| r.sup_dev)),
        l_family,
        angle_above: opt(&|r| r.angle_above),
        angle_below: opt(&|r| r.angle_below),
        boundary_tv,
    }
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn quarter_means() {
        let q = quarters(&[4.0, 4.0, 3.0, 3.0, 2.0, 2.0, 1.0, 1.0]);
        assert_eq!((q.first, q.last), (4.0, 1.0));
        assert!(q.decayed(0.5));
    }

    #[test]
    fn uniform_rows_give_zero_metrics() {
        let rows = vec![StripAsymptotics::default(); 10];
        let r = asymptotics(&rows, classify(Some(0.0)), &[]);
        assert_eq!(r.case, SlopeSign::Zero);
        assert_eq!(r.sup_dev.last, 0.0);
        assert!(r.l_family.iter().all(|q| q.decayed(1.0)));
    }
}
