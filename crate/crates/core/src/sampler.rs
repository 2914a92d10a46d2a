//! Sequences `theta_k` in `(-1, 1)` for the random choice step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    /// Base-2 radical inverse; equidistributed.
    #[default]
    VanDerCorput,
    /// Uniform draws from a seeded ChaCha stream.
    Random,
}

#[derive(Debug, Clone)]
pub enum Sampler {
    VanDerCorput { index: u64 },
    Random(ChaCha8Rng),
}

/// Base-2 radical inverse of `n`.
pub fn van_der_corput(mut n: u64) -> f64 {
    let mut x = 0.0;
    let mut f = 0.5;
    while n > 0 {
        if n & 1 == 1 {
            x += f;
        }
        n >>= 1;
        f *= 0.5;
    }
    x
}

impl Sampler {
    /// The seed offsets the radical inverse sequence, or seeds the stream.
    pub fn new(kind: SamplerKind, seed: u64) -> Self {
        match kind {
            SamplerKind::VanDerCorput => Sampler::VanDerCorput { index: seed },
            SamplerKind::Random => Sampler::Random(ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    pub fn next_theta(&mut self) -> f64 {
        match self {
            Sampler::VanDerCorput { index } => {
                *index += 1;
                2.0 * van_der_corput(*index) - 1.0
            }
            Sampler::Random(rng) => loop {
                let t: f64 = rng.gen_range(-1.0..1.0);
                if t > -1.0 {
                    break t;
                }
            },
        }
    }
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn radical_inverse_prefix() {
        let v: Vec<f64> = (1..=6).map(van_der_corput).collect();
        assert_eq!(v, [0.5, 0.25, 0.75, 0.125, 0.625, 0.375]);
    }

    #[test]
    fn thetas_stay_open_interval() {
        for kind in [SamplerKind::VanDerCorput, SamplerKind::Random] {
            let mut s = Sampler::new(kind, 7);
            for _ in 0..10_000 {
                let t = s.next_theta();
                assert!(t > -1.0 && t < 1.0);
            }
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a: Vec<f64> = {
            let mut s = Sampler::new(SamplerKind::Random, 3);
            (0..5).map(|_| s.next_theta()).collect()
        };
        let mut s = Sampler::new(SamplerKind::Random, 3);
        let b: Vec<f64> = (0..5).map(|_| s.next_theta()).collect();
        assert_eq!(a, b);
    }
}
