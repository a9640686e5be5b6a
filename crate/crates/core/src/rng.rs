//! Counter-based deterministic uniform streams.
//!
//! Every random quantity in the crate is a pure function of
//! `(seed, stream, draw)`: there is no generator state to thread through the
//! code, so trials can run in any order, or on any number of threads, and
//! produce bit-identical results. The mixer is the splitmix64 finalizer
//! applied to the three key words in sequence.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const SALT_STREAM: u64 = 0xA076_1D64_78BD_642F;
const SALT_DRAW: u64 = 0xE703_7ED1_A0B4_28DB;

/// splitmix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64 keyed pseudo-random bits for `(seed, stream, draw)`.
#[inline]
pub fn bits(seed: u64, stream: u64, draw: u64) -> u64 {
    let mut z = mix64(seed ^ GAMMA);
    z = mix64(z ^ stream.wrapping_mul(GAMMA) ^ SALT_STREAM);
    z = mix64(z ^ draw.wrapping_mul(GAMMA) ^ SALT_DRAW);
    z
}

/// Keyed uniform draw in `[0, 1)` with 53-bit resolution.
///
/// The upper bound is strict: the result is `k * 2^-53` with
/// `k < 2^53`, so `uniform(..) < 1.0` always holds, and an outcome of
/// probability zero can never be selected by a `draw < p` comparison.
#[inline]
pub fn uniform(seed: u64, stream: u64, draw: u64) -> f64 {
    (bits(seed, stream, draw) >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Derive an independent sub-seed, for nested experiments (e.g. one seed per
/// repetition of a power study).
#[inline]
pub fn derive(seed: u64, salt: u64) -> u64 {
    mix64(seed ^ salt.wrapping_mul(GAMMA) ^ SALT_STREAM)
}
