//! Keyed random substreams.
//!
//! Every random draw in a run comes from a ChaCha8 stream addressed by
//! `(epoch, particle, channel)`. Streams are independent of evaluation order,
//! so the Langevin loop can be split across any number of workers without
//! changing a single bit of output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose of a substream; part of the key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Channel {
    Init = 1,
    Noise = 2,
    Partner = 3,
    Eta = 4,
    Weights = 5,
    Metrics = 6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Streams {
    seed: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Opens the generator for one `(epoch, particle, channel)` key.
    pub fn substream(&self, epoch: u64, particle: u64, channel: Channel) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        let mut state = splitmix64(self.seed);
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&state.to_le_bytes());
            state = splitmix64(state);
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        let stream = splitmix64(splitmix64(epoch ^ (channel as u64).rotate_left(56)) ^ particle.rotate_left(17));
        rng.set_stream(stream);
        rng
    }
}
