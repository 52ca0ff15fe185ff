//! Self-contained deterministic PRNG.
//!
//! Every randomized operation in this crate (network generation, weight
//! assignment, tie breaking, batch seed derivation) draws from the
//! xoshiro256** generator seeded through SplitMix64, both written out here
//! so that a seed reproduces the identical stream on any platform or in a
//! reimplementation in another language.
//!
//! References: Blackman & Vigna, "Scrambled linear pseudorandom number
//! generators" (xoshiro256**); Steele, Lea & Flood, "Fast splittable
//! pseudorandom number generators" (SplitMix64).

/// The SplitMix64 output function applied to a raw 64-bit value.
///
/// Used both as the xoshiro seeding primitive and as the mixing step of
/// [`derive_seed`].
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a sequence of stream labels.
///
/// The absorption is a chained SplitMix64 finalizer: `s := mix64(s ^ label)`
/// for each label in order. Batch runs use this to give every
/// (model, n, m, trial) cell an independent, reproducible seed.
pub fn derive_seed(base: u64, labels: &[u64]) -> u64 {
    let mut s = mix64(base);
    for &label in labels {
        s = mix64(s ^ label);
    }
    s
}

/// SplitMix64 sequence generator; primarily used to expand one 64-bit seed
/// into the 256-bit xoshiro state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// xoshiro256** generator.
#[derive(Debug, Clone)]
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    /// Seeds the 256-bit state from a single 64-bit seed via SplitMix64,
    /// as recommended by the xoshiro authors.
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        let mut s = [0u64; 4];
        for slot in &mut s {
            *slot = sm.next_u64();
        }
        // The all-zero state is the one fixed point of the recurrence.
        if s == [0, 0, 0, 0] {
            s[0] = 0x9E37_79B9_7F4A_7C15;
        }
        Self { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform integer in `[0, bound)`, unbiased via rejection of the
    /// low-end remainder range.
    ///
    /// Panics if `bound` is zero.
    pub fn gen_range(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "gen_range bound must be positive");
        // (2^64 - bound) mod bound; values below this would bias the modulus.
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    pub fn gen_index(&mut self, len: usize) -> usize {
        self.gen_range(len as u64) as usize
    }

    /// Uniform double in `[0, 1)` with 53 bits of precision.
    pub fn gen_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
