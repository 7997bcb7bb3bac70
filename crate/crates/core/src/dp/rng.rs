//! Path-keyed random streams.
//!
//! A stream is identified by a root seed plus a path of `(purpose, index)`
//! pairs. The path is hashed into a ChaCha key, so every stream is a pure
//! function of its identity: the same path always replays the same sequence,
//! and sibling paths (contour cells, repeated verifications) can be consumed
//! on different threads in any order.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

#[derive(Clone)]
pub struct RngStream {
    seed: u64,
    path: Vec<(String, u64)>,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn root(seed: u64) -> Self {
        Self::at(seed, Vec::new())
    }

    fn at(seed: u64, path: Vec<(String, u64)>) -> Self {
        let mut h = splitmix64(seed);
        for (label, index) in &path {
            h = splitmix64(h ^ fnv1a(label.as_bytes()));
            h = splitmix64(h ^ *index);
        }
        let mut key = [0u8; 32];
        let mut state = h;
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        Self {
            seed,
            path,
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Fresh child stream at `path ++ [(purpose, index)]`. The parent's
    /// position is irrelevant: deriving never consumes parent draws.
    pub fn derive(&self, purpose: &str, index: u64) -> RngStream {
        let mut path = self.path.clone();
        path.push((purpose.to_owned(), index));
        Self::at(self.seed, path)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[(String, u64)] {
        &self.path
    }

    /// Uniform draw strictly inside (0, 1) with 53 bits of resolution.
    pub fn uniform_open(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

impl fmt::Debug for RngStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RngStream({self})")
    }
}

impl fmt::Display for RngStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.seed)?;
        for (label, index) in &self.path {
            write!(f, "/{label}:{index}")?;
        }
        Ok(())
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
