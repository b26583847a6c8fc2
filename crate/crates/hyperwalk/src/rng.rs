//! Seedable, portable randomness.
//!
//! All randomness in this crate comes from ChaCha8 keyed by a caller-supplied
//! 64-bit seed. Independent substreams are carved out with the generator's
//! stream counter, so run `k` of an experiment always uses
//! `substream(master_seed, k)` no matter how runs are scheduled. A walk on
//! its own uses substream 0.
//!
//! Selection draws are pinned for cross-implementation trace matching:
//! choosing uniformly among `k` candidates consumes one bounded integer draw
//! when `k > 1` and nothing when `k == 1`; weighted selection always consumes
//! exactly one `f64` draw tested against cumulative weights.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The pinned generator type.
pub type WalkRng = ChaCha8Rng;

/// Substream `index` of the generator keyed by `seed`.
pub fn substream(seed: u64, index: u64) -> WalkRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform index into `0..len`; singleton choices consume no randomness.
pub fn choose_index(rng: &mut WalkRng, len: usize) -> usize {
    debug_assert!(len > 0);
    if len == 1 {
        0
    } else {
        rng.random_range(0..len)
    }
}

/// One cumulative-weight draw over non-negative weights; returns the chosen
/// index. Consumes exactly one `f64` draw.
pub fn weighted_index(rng: &mut WalkRng, weights: &[f64]) -> usize {
    debug_assert!(!weights.is_empty());
    let total: f64 = weights.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    weights.len() - 1
}
