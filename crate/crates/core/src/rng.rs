//! Seeded random substreams.
//!
//! A run is reproducible from its root seed alone. Every unit of sampling
//! work (one stratum in one sampling round, one crude-MC replicate) draws
//! from its own ChaCha8 stream, identified by `(seed, stream)`. Stream ids
//! are handed out by a [`StreamCounter`] in a fixed visiting order, so the
//! numbers a stratum sees do not depend on which thread samples it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids at or above this value are reserved for crude-MC baselines,
/// keeping them disjoint from the adaptive sampler's counter.
pub const CRUDE_STREAM_BASE: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Fresh generator positioned at the start of this substream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// The substream `offset` ids after this one, same seed.
    pub fn offset(&self, offset: u64) -> Self {
        Self::new(self.seed, self.stream.wrapping_add(offset))
    }
}

/// Deterministic allocator of stream ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamCounter {
    seed: u64,
    next: u64,
}

impl StreamCounter {
    pub fn new(seed: u64) -> Self {
        Self { seed, next: 0 }
    }

    pub fn starting_at(base: RngStream) -> Self {
        Self {
            seed: base.seed,
            next: base.stream,
        }
    }

    /// Reserve `k` consecutive ids and return the first as a stream.
    pub fn take(&mut self, k: usize) -> RngStream {
        let first = RngStream::new(self.seed, self.next);
        self.next = self.next.wrapping_add(k as u64);
        first
    }

    pub fn peek(&self) -> RngStream {
        RngStream::new(self.seed, self.next)
    }
}
