//! Gaussian tail utilities and the seeded random stream contract.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Deterministic random stream identified by `(seed, stream)`.
///
/// Streams with the same seed but different ids are independent ChaCha
/// streams, so per-trial and per-purpose generators never share state.
#[derive(Clone, Debug)]
pub struct SeededRandomness {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl SeededRandomness {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SeededRandomness { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// One draw from `N(0, sigma^2)`; exactly zero when `sigma == 0`.
    pub fn normal(&mut self, sigma: f64) -> Result<f64> {
        normal_sample(self, sigma)
    }
}

impl RngCore for SeededRandomness {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

pub fn normal_sample(rng: &mut SeededRandomness, sigma: f64) -> Result<f64> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise std must be finite and >= 0, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(0.0);
    }
    let z: f64 = StandardNormal.sample(&mut rng.rng);
    Ok(sigma * z)
}

/// SplitMix64 finalizer.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Stable 64-bit mix of a master seed with a list of indices.
pub fn mix_seed(master: u64, indices: &[u64]) -> u64 {
    indices
        .iter()
        .fold(splitmix64(master), |acc, &i| splitmix64(acc ^ splitmix64(i)))
}

/// `P[N(0,1) > z]`.
pub fn std_normal_upper_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

/// `z` such that `P[N(0,1) > z] = q`, by bisection on the upper tail.
pub fn std_normal_upper_quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "tail probability must lie in (0, 1), got {q}"
        )));
    }
    // the tail is below 1e-300 past 37.5, so this bracket covers every
    // representable q
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if std_normal_upper_tail(mid) > q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (tl, th) = (std_normal_upper_tail(lo), std_normal_upper_tail(hi));
    Ok(if (tl - q).abs() <= (th - q).abs() { lo } else { hi })
}
