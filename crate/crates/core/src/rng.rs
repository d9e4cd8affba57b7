//! Deterministic seeded generator for reproducible test fields.
//!
//! The generator is splitmix64 exactly as published by Vigna
//! (<https://prng.di.unimi.it/splitmix64.c>): state advances by the odd
//! constant 0x9E3779B97F4A7C15 and each output is finalized with the
//! xor-shift/multiply mix below. Runs are reproducible across
//! implementations by construction: any language reproducing these two
//! functions reproduces every random field this crate emits.

/// One splitmix64 finalization mix of a 64-bit word.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// splitmix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.state)
    }

    /// Uniform in [0, 1): top 53 bits scaled by 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [-0.5, 0.5).
    pub fn next_centered(&mut self) -> f64 {
        self.next_f64() - 0.5
    }
}

/// Key a sub-stream by folding words into the seed, one mix per word.
/// Used to give every Fourier mode its own coefficient stream independent
/// of grid resolution or enumeration order.
pub fn keyed(seed: u64, words: &[u64]) -> SplitMix64 {
    let mut s = mix64(seed ^ 0x6A09_E667_F3BC_C909);
    for &w in words {
        s = mix64(s ^ w);
    }
    SplitMix64::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First three outputs for seed 0, cross-checked against the
        // reference C implementation.
        let mut g = SplitMix64::new(0);
        assert_eq!(g.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(g.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(g.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a: Vec<u64> = (0..8).map(|_| 0).scan(SplitMix64::new(7), |g, _| Some(g.next_u64())).collect();
        let b: Vec<u64> = (0..8).map(|_| 0).scan(SplitMix64::new(7), |g, _| Some(g.next_u64())).collect();
        let c: Vec<u64> = (0..8).map(|_| 0).scan(SplitMix64::new(8), |g, _| Some(g.next_u64())).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unit_interval() {
        let mut g = SplitMix64::new(123);
        for _ in 0..1000 {
            let x = g.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn keyed_streams_differ_per_mode() {
        let a = keyed(1, &[0, 1]).next_u64();
        let b = keyed(1, &[1, 0]).next_u64();
        assert_ne!(a, b);
    }
}
