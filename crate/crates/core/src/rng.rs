//! Seeded random streams and exact categorical draws.
//!
//! Every sampler takes an explicit generator. Streams are derived from a
//! 64-bit seed plus a stream index, so work split into chunks reproduces
//! bit-for-bit regardless of how chunks are scheduled.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::Rational;

pub type SelectionRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SelectionRng {
    stream(seed, 0)
}

pub fn stream(seed: u64, index: u64) -> SelectionRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws index `i` with probability `weights[i]`, or `None` with the leftover mass.
///
/// A uniform value `u = r / 2^64` is built from 64 random bits and compared
/// against cumulative rational thresholds, so resolution is `2^-64`.
pub fn categorical<R: Rng + ?Sized>(weights: &[Rational], rng: &mut R) -> Option<usize> {
    let r = BigInt::from(rng.random::<u64>());
    let two64 = BigInt::from(1u128 << 64);
    let mut cum = Rational::from_integer(BigInt::from(0));
    for (i, w) in weights.iter().enumerate() {
        debug_assert!(!w.is_negative());
        cum += w;
        // u < cum  <=>  r * den < num * 2^64
        if &r * cum.denom() < cum.numer() * &two64 {
            return Some(i);
        }
    }
    None
}

/// Same draw as [`categorical`] for weights given in units of `1/denom`.
pub fn categorical_units<R: Rng + ?Sized>(units: &[u64], denom: u64, rng: &mut R) -> Option<usize> {
    let r = rng.random::<u64>() as u128;
    let mut cum: u128 = 0;
    for (i, &w) in units.iter().enumerate() {
        cum += w as u128;
        if r * (denom as u128) < cum << 64 {
            return Some(i);
        }
    }
    None
}

/// `true` with probability `num/den`.
pub fn bernoulli<R: Rng + ?Sized>(num: u64, den: u64, rng: &mut R) -> bool {
    let r = rng.random::<u64>() as u128;
    r * (den as u128) < (num as u128) << 64
}
