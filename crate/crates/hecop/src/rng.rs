//! Counter-based random number generation.
//!
//! Every random quantity in the crate is a pure function of
//! `(seed, stream, counter)`: `stream` identifies a replica or draw index,
//! `counter` enumerates values within the stream (step, coordinate, matrix
//! entry). Replicas can therefore run in any order, on any number of
//! threads, and still produce bit-identical results.

use std::f64::consts::PI;

/// SplitMix64 finalizer: full-avalanche mixing of a 64-bit word.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// A keyed counter stream: `value_at(ctr)` walks the SplitMix64 sequence of
/// a key derived from `(seed, stream)` with random access by counter.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(mix64(seed ^ 0x243f_6a88_85a3_08d3) ^ stream.wrapping_mul(GOLDEN));
        CounterRng { key }
    }

    #[inline]
    pub fn u64_at(&self, ctr: u64) -> u64 {
        mix64(self.key.wrapping_add(ctr.wrapping_mul(GOLDEN)))
    }

    /// Uniform in the open interval (0, 1).
    #[inline]
    pub fn uniform_at(&self, ctr: u64) -> f64 {
        // 53 significant bits, offset by half an ulp so 0 and 1 are excluded.
        ((self.u64_at(ctr) >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box-Muller; consumes counters `2*ctr` and `2*ctr + 1`.
    #[inline]
    pub fn normal_at(&self, ctr: u64) -> f64 {
        let u1 = self.uniform_at(2 * ctr);
        let u2 = self.uniform_at(2 * ctr + 1);
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }
}
