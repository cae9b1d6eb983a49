//! Portable seeded randomness.
//!
//! All random draws use xoshiro256++ (Blackman & Vigna). A `u64` seed is
//! expanded into the 256-bit state with SplitMix64 (increment
//! `0x9e3779b97f4a7c15`, multipliers `0xbf58476d1ce4e5b9` and
//! `0x94d049bb133111eb`), so identical seeds give identical streams on every
//! platform.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Rng = Xoshiro256PlusPlus;

pub fn seeded(seed: u64) -> Rng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Independent stream `index` derived from a master seed.
pub fn stream(master: u64, index: u64) -> Rng {
    seeded(splitmix64(master ^ splitmix64(index.wrapping_add(1))))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
