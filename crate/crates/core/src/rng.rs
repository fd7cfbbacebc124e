//! Seeded randomness shared by token selection and dataset sampling.
//!
//! Every random draw in the crate goes through [`Rng`], a ChaCha8 stream
//! seeded from a 64-bit value. ChaCha8 output is specified bit-for-bit and
//! does not depend on platform word size or endianness, so a seed
//! reproduces the same masks and plans everywhere. Independent sub-streams
//! (one per connected component, for example) are keyed with
//! [`derive_seed`] so that draws never depend on iteration order.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The pinned generator.
pub type Rng = ChaCha8Rng;

/// Creates the pinned generator from a 64-bit seed.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of an independent sub-stream keyed by `stream`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream))
}

/// Draws `k` distinct values from `0..n` with a partial Fisher-Yates shuffle.
///
/// The returned order is the draw order, not sorted. `k` is clamped to `n`.
pub fn sample_indices(rng: &mut Rng, n: usize, k: usize) -> Vec<usize> {
    let k = k.min(n);
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_indices_distinct_and_in_range() {
        let mut rng = seeded(3);
        let mut v = sample_indices(&mut rng, 50, 20);
        assert_eq!(v.len(), 20);
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), 20);
        assert!(v.iter().all(|&i| i < 50));
    }

    #[test]
    fn sample_indices_clamps() {
        let mut rng = seeded(0);
        let mut v = sample_indices(&mut rng, 3, 10);
        v.sort_unstable();
        assert_eq!(v, vec![0, 1, 2]);
    }

    #[test]
    fn derived_streams_differ() {
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }
}
