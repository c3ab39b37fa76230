//! Seeded, splittable random streams.
//!
//! A stream is identified by a base seed and a path of integer ids, for
//! example `(base_seed, [replication, purpose])`. The base seed keys a ChaCha8
//! generator and the path selects one of its 2^64 independent streams, so
//! distinct paths never share output and each stream can be regenerated in
//! isolation, in any order, on any thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a path of ids into one 64-bit stream id.
pub fn stream_id(path: &[u64]) -> u64 {
    path.iter()
        .fold(0x5EED_0F57_12EA_u64, |acc, &id| splitmix64(acc ^ splitmix64(id)))
}

/// The stream `(base_seed, path)`.
pub fn stream(base_seed: u64, path: &[u64]) -> StreamRng {
    let mut key = [0u8; 32];
    let mut state = base_seed;
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream_id(path));
    rng
}
