//! Stream derivation for reproducible, order-independent frame seeds.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fold a sequence of words into one seed. Each word passes through the
/// finalizer together with the running state, so `[a, b]` and `[b, a]` differ.
pub fn mix_seed(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0u64, |acc, &w| splitmix64(acc ^ splitmix64(w)))
}

/// Seed of frame `frame_index` in sweep stream `stream`.
pub fn frame_seed(base_seed: u64, stream: u64, frame_index: u64) -> u64 {
    mix_seed(&[base_seed, stream, frame_index])
}
