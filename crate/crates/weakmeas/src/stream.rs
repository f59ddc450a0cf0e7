//! Deterministic random streams with collision-free substream derivation.
//!
//! Every stochastic operation in the crate draws from a [`RandomStream`]: a
//! ChaCha12 generator in counter mode, keyed by a 64-bit master seed with the
//! substream index as the ChaCha stream id. Identical `(seed, stream_index)`
//! pairs produce identical draw sequences on every platform and for any
//! number of worker threads, which is what makes parallel Monte Carlo runs
//! byte-reproducible.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// A seeded random substream.
///
/// Derivation is counter-mode: the master seed keys the ChaCha12 cipher and
/// the substream index selects its stream, so distinct indices can never
/// share generator state.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha12Rng,
    seed: u64,
    stream_index: u64,
}

impl RandomStream {
    /// Stream `stream_index` of the family keyed by `master_seed`.
    pub fn derive(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            rng,
            seed: master_seed,
            stream_index,
        }
    }

    /// Stream 0 of the family keyed by `seed`.
    pub fn new(seed: u64) -> Self {
        Self::derive(seed, 0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Gaussian draw with the given mean and standard deviation.
    pub fn normal(&mut self, mean: f64, std_dev: f64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        mean + std_dev * z
    }

    /// Index draw with probability proportional to `weights[i]`.
    ///
    /// Weights must be non-negative with a positive sum; they need not be
    /// normalized.
    pub fn pick_weighted(&mut self, weights: &[f64]) -> usize {
        debug_assert!(!weights.is_empty());
        let total: f64 = weights.iter().sum();
        debug_assert!(total > 0.0 && total.is_finite());
        let mut u = self.uniform() * total;
        for (i, w) in weights.iter().enumerate() {
            u -= w;
            if u < 0.0 {
                return i;
            }
        }
        // Round-off can push u marginally past the last weight.
        weights.len() - 1
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// Substream `realization_index` of the family keyed by `master_seed`.
pub fn derive_stream(master_seed: u64, realization_index: u64) -> RandomStream {
    RandomStream::derive(master_seed, realization_index)
}
