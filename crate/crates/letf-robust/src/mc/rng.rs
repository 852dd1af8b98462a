//! Per-path normal streams keyed by `(seed, path index)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Standard normal draws from one ChaCha8 stream, optionally negated for the
/// antithetic partner.
pub struct NormalStream {
    rng: ChaCha8Rng,
    sign: f64,
}

impl NormalStream {
    /// Stream `index` of generator `seed`.
    pub fn new(seed: u64, index: u64, antithetic_partner: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self {
            rng,
            sign: if antithetic_partner { -1.0 } else { 1.0 },
        }
    }

    pub fn draw(&mut self) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        self.sign * z
    }

    /// Uniform draw on `[0, 1)`, not negated.
    pub fn uniform(&mut self) -> f64 {
        rand::Rng::random::<f64>(&mut self.rng)
    }
}
