//! Deterministic seeding helpers shared by field generation, the random
//! seeds algorithm, and the experiment harness.

use rand_core::RngCore;

/// Folds a sequence of words into one seed, splitmix64-style. Used to derive
/// independent substream seeds from (base seed, coordinates, indices) so that
/// results never depend on iteration order.
pub fn mix64(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        h ^= p;
        h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}

/// Uniform draw in [0, 1) from the top 53 bits of the generator.
pub(crate) fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Poisson sample by CDF inversion: the smallest k with F(k) > u.
pub(crate) fn poisson_inverse(lambda: f64, u: f64) -> u64 {
    debug_assert!(lambda >= 0.0);
    let mut p = (-lambda).exp();
    let mut cdf = p;
    let mut k: u64 = 0;
    // For lambda so large that exp(-lambda) underflows this would spin;
    // cap well above any desk-scale intensity.
    while u >= cdf && k < 4096 {
        k += 1;
        p *= lambda / k as f64;
        cdf += p;
    }
    k
}
