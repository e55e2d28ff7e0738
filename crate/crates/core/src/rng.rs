//! Seeded random streams.
//!
//! Every run draws from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`. Index draws go through [`index`], which
//! samples in `u64` so results do not depend on the platform's `usize` width.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;

pub use rand_chacha::ChaCha8Rng as StdStream;

/// Name of the generator recorded in reports.
pub const ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64)";

pub fn seeded(seed: u64) -> StdStream {
    StdStream::seed_from_u64(seed)
}

/// Uniform index in `0..n`. `n` must be positive.
pub fn index<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    debug_assert!(n > 0);
    rng.gen_range(0..n as u64) as usize
}

/// Uniform pick from a non-empty slice.
pub fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> &'a T {
    &items[index(rng, items.len())]
}

/// Fisher-Yates shuffle using [`index`].
pub fn shuffle<T, R: Rng + ?Sized>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = index(rng, i + 1);
        items.swap(i, j);
    }
}

/// Uniform draw in `[0, 1)`.
pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}
