//! Named random streams derived from a single master seed.
//!
//! A stream is addressed by `(master_seed, domain, replica, lane)`. The
//! master seed, domain and lane are mixed into a ChaCha8 key and the
//! replica becomes the ChaCha stream id, so every replica of every
//! experiment draws from its own counter-based stream and results do not
//! depend on the order in which replicas are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Experiment domains, so that e.g. the direct and reweighted arms of an
/// importance test never share draws.
pub mod domain {
    pub const SIMULATE: u32 = 0;
    pub const DIRECT: u32 = 1;
    pub const REWEIGHTED: u32 = 2;
    pub const RIGIDITY: u32 = 3;
    pub const NOVIKOV: u32 = 4;
    pub const MOMENTS: u32 = 5;
}

/// Lane carrying the compound Poisson channel (count, times, marks).
pub const JUMP_LANE: u32 = 0;

/// Lane carrying the Gaussian increments of mode `mode` (0-based).
pub fn mode_lane(mode: usize) -> u32 {
    1 + mode as u32
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Handle on the streams of one replica.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicaStreams {
    pub master_seed: u64,
    pub domain: u32,
    pub replica: u64,
}

impl ReplicaStreams {
    pub fn new(master_seed: u64, domain: u32, replica: u64) -> Self {
        Self {
            master_seed,
            domain,
            replica,
        }
    }

    pub fn lane(&self, lane: u32) -> Stream {
        let mut state =
            self.master_seed ^ ((self.domain as u64) << 32 | lane as u64).rotate_left(17);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.replica);
        rng
    }

    pub fn jumps(&self) -> Stream {
        self.lane(JUMP_LANE)
    }

    pub fn mode(&self, mode: usize) -> Stream {
        self.lane(mode_lane(mode))
    }
}
