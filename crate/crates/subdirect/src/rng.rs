//! Seeded PRNG for sampled searches and randomised tests.
//!
//! The algorithm is xoshiro256++ with a splitmix64 seeding stage. It is
//! implemented here so that sampled reports are bit-identical across
//! platforms and dependency upgrades. Reports carry the algorithm name.

/// Name echoed in report configs.
pub const ALGORITHM: &str = "xoshiro256++";

#[derive(Debug, Clone)]
pub struct Xoshiro256PlusPlus {
    s: [u64; 4],
}

impl Xoshiro256PlusPlus {
    pub fn seed_from_u64(seed: u64) -> Self {
        // splitmix64 expansion of the seed into the full state
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        let s = [next(), next(), next(), next()];
        Xoshiro256PlusPlus { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform draw from `0..n` by rejection, so the distribution is exact.
    pub fn gen_range(&mut self, n: u64) -> u64 {
        assert!(n > 0, "gen_range requires a non-empty range");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// Uniform draw from `0..n` for wide ranges (candidate spaces above 2^64).
    pub fn gen_range_u128(&mut self, n: u128) -> u128 {
        assert!(n > 0);
        if n <= u64::MAX as u128 {
            return self.gen_range(n as u64) as u128;
        }
        let zone = u128::MAX - (u128::MAX % n);
        loop {
            let x = ((self.next_u64() as u128) << 64) | self.next_u64() as u128;
            if x < zone {
                return x % n;
            }
        }
    }
}
