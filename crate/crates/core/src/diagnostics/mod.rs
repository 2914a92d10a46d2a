//! Quantities monitored along a run.

pub mod asymptotics;
pub mod entropy;
pub mod functional;
pub mod survey;

pub use functional::{approaching, functional, FunctionalReport, WaveRecord, Weights};

use crate::thermo::GasState;

/// Total variation in `y` of each primitive component `(u, v, p, rho, Z)`.
pub fn total_variation(states: &[GasState]) -> [f64; 5] {
    let mut tv = [0.0; 5];
    for w in states.windows(2) {
        let (a, b) = (w[0].as_array(), w[1].as_array());
        for i in 0..5 {
            tv[i] += (b[i] - a[i]).abs();
        }
    }
    tv
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn variation_of_monotone_steps() {
        let a = GasState::new(2.0, 0.0, 1.0, 1.0, 0.0);
        let b = GasState::new(2.5, 0.1, 1.0, 2.0, 0.5);
        let tv = total_variation(&[a, b, b, a]);
        assert!((tv[0] - 1.0).abs() < 1e-15);
        assert!((tv[3] - 2.0).abs() < 1e-15);
        assert!((tv[4] - 1.0).abs() < 1e-15);
    }
}
