//! Deterministic random-number generation with stable per-task seed derivation.
//!
//! Every stochastic run in this crate is driven by a master seed. Parallel
//! sweeps derive one child seed per sweep point from `(master, index)` so the
//! result of a sweep is bit-identical regardless of how many worker threads
//! execute it, and regardless of execution order.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// The RNG used throughout the crate.
pub type SimRng = ChaCha12Rng;

/// Mix a 64-bit value through the SplitMix64 finalizer.
///
/// Used to decorrelate child seeds derived from consecutive indices.
#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed for sweep point `index` from a master seed.
///
/// The derivation is a pure function of `(master, index)`, so sweeps are
/// reproducible point-by-point.
#[inline]
pub fn child_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0xA5A5_5A5A_DEAD_BEEF)))
}

/// Construct the RNG for sweep point `index` under a master seed.
pub fn rng_for_point(master: u64, index: u64) -> SimRng {
    SimRng::seed_from_u64(child_seed(master, index))
}

/// Construct the RNG for a master seed (single-run tasks).
pub fn rng_from_seed(master: u64) -> SimRng {
    SimRng::seed_from_u64(master)
}

/// Draw one zero-mean circular complex Gaussian sample with total variance
/// `variance`, i.e. each quadrature carries `variance/2`.
#[inline]
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance * 0.5).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// Fill a buffer with zero-mean circular complex Gaussian samples of total
/// variance `variance`.
pub fn complex_gaussian_vec<R: Rng + ?Sized>(rng: &mut R, variance: f64, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex_gaussian(rng, variance)).collect()
}
