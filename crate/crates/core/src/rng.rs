//! Seeded random generation used by solvers and verification suites.
//!
//! Everything flows from one `ChaCha8` stream per run; derived tasks get
//! `derive(seed, tag)` streams so parallel schedules cannot change results.

use alloc::vec::Vec;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a tagged subtask of a run.
pub fn derive(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Standard complex Gaussian via Box-Muller.
pub fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * core::f64::consts::PI * u2;
    C64::new(r * theta.cos(), r * theta.sin()) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian_c64(rng)).collect()
}

/// Uniform point on the complex unit circle.
pub fn unit_phase(rng: &mut impl Rng) -> C64 {
    let theta = 2.0 * core::f64::consts::PI * rng.gen::<f64>();
    C64::new(theta.cos(), theta.sin())
}

/// Uniform permutation by Fisher-Yates.
pub fn permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}
