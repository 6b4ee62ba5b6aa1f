use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Random stream used throughout the crate. ChaCha20 is counter based, so a
/// (seed, stream) pair names the same sequence on every platform.
pub type StreamRng = ChaCha20Rng;

/// A master seed plus a stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_id: 0,
        }
    }

    /// Same master seed, different stream.
    pub fn stream(self, stream_id: u64) -> Self {
        SeedSpec { stream_id, ..self }
    }

    /// A child seed for nested work (fold `i`, then sample `j` inside it, ...).
    /// The child's master seed mixes in this seed's stream id, so children of
    /// different streams never collide.
    pub fn derive(self, child: u64) -> Self {
        SeedSpec {
            master_seed: splitmix64(self.master_seed ^ splitmix64(self.stream_id.wrapping_add(0x632b_e59b_d9b4_e019))),
            stream_id: child,
        }
    }

    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec::new(0)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
