//! Deterministic seed derivation.
//!
//! Every random stream in the crate is a ChaCha8 generator keyed by a
//! 64-bit value obtained by folding a list of words through the SplitMix64
//! finaliser. Streams are addressed by content (master seed, grid index,
//! trial, block, row) rather than by draw order, so any cell of a sweep
//! can be regenerated in isolation and parallel schedules cannot change
//! the output.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a word sequence.
pub fn mix(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x5bd1_e995_u64, |h, &w| splitmix64(h ^ splitmix64(w)))
}

/// ChaCha8 stream keyed by `key`. The 256-bit ChaCha key is four
/// consecutive SplitMix64 outputs starting at `key`.
pub fn stream(key: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    let mut state = key;
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(state).to_le_bytes());
        state = state.wrapping_add(GOLDEN);
    }
    ChaCha8Rng::from_seed(seed)
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `u64`.
#[inline]
pub fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Bernoulli(p) draw; exact for `p = 0` and `p = 1`.
#[inline]
pub fn bernoulli<R: RngCore>(rng: &mut R, p: f64) -> bool {
    unit_f64(rng) < p
}

/// Seed of trial `trial` at grid point `p_index` of a sweep.
pub fn trial_seed(master: u64, p_index: usize, trial: usize) -> u64 {
    mix(&[master, p_index as u64, trial as u64])
}
