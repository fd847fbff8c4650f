//! Seeded, portable random streams.
//!
//! All randomness derives from one 64-bit master seed. Independent streams
//! are obtained by counter-splitting: the ChaCha8 key is the expanded master
//! seed and the 64-bit ChaCha stream id encodes `(domain, index)`. A sample
//! measured on stream `(Measure, i)` sees the same random words whether the
//! loop runs sequentially or on a thread pool.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tag for a family of streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Domain {
    Draw = 1,
    Shuffle = 2,
    Measure = 3,
    Test = 4,
    Cover = 5,
    Check = 6,
}

const INDEX_BITS: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStreams {
    seed: u64,
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The generator for stream `index` of `domain`.
    pub fn stream(&self, domain: Domain, index: u64) -> ChaCha8Rng {
        debug_assert!(index < (1 << INDEX_BITS));
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((domain as u64) << INDEX_BITS) | index);
        rng
    }

    /// A child family, used when one run spawns sub-runs (e.g. one per seed
    /// inside a sweep).
    pub fn child(&self, index: u64) -> RngStreams {
        use rand::RngCore;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::MAX - index);
        RngStreams::new(rng.next_u64())
    }
}
