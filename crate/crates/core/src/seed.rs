//! Per-trial seed derivation.
//!
//! A trial's seed depends only on `(base_seed, point_index, trial_index)`, so
//! results do not depend on which worker runs a trial or in what order.

/// SplitMix64 output mixer. A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed for trial `trial_index` of grid point `point_index`.
///
/// For a fixed base seed the map is injective over all index pairs below
/// 2³²: the pair packs losslessly into one word, multiplication by an odd
/// constant and addition are bijections mod 2⁶⁴, and so is [`mix64`].
pub fn split_seed(base_seed: u64, point_index: u64, trial_index: u64) -> u64 {
    debug_assert!(point_index < 1 << 32 && trial_index < 1 << 32);
    let key = (point_index << 32) | (trial_index & 0xffff_ffff);
    mix64(base_seed.wrapping_add(key.wrapping_mul(GOLDEN_GAMMA)))
}
