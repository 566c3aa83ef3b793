//! Deterministic, splittable random streams.
//!
//! A [`SeededStream`] names a ChaCha8 key (from `seed`) and one of its 2^64
//! independent streams. Work items derive their own child stream by index,
//! so the draws a replication sees do not depend on which thread ran it or
//! in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 1949;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, 0)
    }

    /// Child stream number `index`. Children of one parent share a key and
    /// differ in stream id, so they never overlap.
    pub fn derive(&self, index: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(1))),
            stream_id: index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

impl Default for SeededStream {
    fn default() -> Self {
        Self::from_seed(DEFAULT_SEED)
    }
}
