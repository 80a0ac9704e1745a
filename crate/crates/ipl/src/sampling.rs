//! Random variate generation for the IPL law via two independent routes,
//! on top of a small deterministic, splittable generator.
//!
//! The generator is a per-stream SplitMix-style counter: a Weyl sequence
//! `state += gamma` (gamma odd, derived from the stream id) pushed through
//! the 64-bit finalizer of SplitMix64.  Identical `(seed, stream_id)` pairs
//! reproduce identical sequences on every platform; distinct stream ids walk
//! distinct Weyl orbits.

use crate::error::{IplError, Result};
use crate::estimation::Sample;
use crate::model::{self, IplParams};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 finalizer: a bijective 64-bit mix.
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// A deterministic random stream addressed by `(seed, stream_id)`.
///
/// Streams are single-owner values; concurrent callers must use distinct
/// stream ids.
#[derive(Debug, Clone)]
pub struct RngStream {
    state: u64,
    gamma: u64,
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let k1 = mix64(seed ^ GOLDEN_GAMMA);
        let k2 = mix64(stream_id ^ STREAM_SALT);
        RngStream {
            state: mix64(k1 ^ k2),
            gamma: mix64(k1.wrapping_add(k2)) | 1,
            seed,
            stream_id,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(self.gamma);
        mix64(self.state)
    }

    /// Uniform draw on the open interval (0, 1): 53 significant bits,
    /// offset by half an ulp so 0.0 and 1.0 are unreachable.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }
}

/// Draws `n` variates by inverting the CDF at uniform points.  This is the
/// default sampler.
pub fn sample_inverse_transform(p: &IplParams, rng: &mut RngStream, n: usize) -> Result<Sample> {
    if n == 0 {
        return Err(IplError::SampleTooSmall { needed: 1, got: 0 });
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        values.push(model::quantile(p, rng.next_open01())?);
    }
    Sample::new(values)
}

/// Draws `n` variates through the Lindley mixture representation:
/// T ~ Lindley(θ) is Exponential(θ) with probability θ/(1+θ), otherwise
/// Gamma(2, θ); the variate is Y = T^{−1/α}.  Independent of the quantile
/// route, which makes the two samplers a distribution-level cross-check.
pub fn sample_lindley_mixture(p: &IplParams, rng: &mut RngStream, n: usize) -> Result<Sample> {
    if n == 0 {
        return Err(IplError::SampleTooSmall { needed: 1, got: 0 });
    }
    let inv_alpha = 1.0 / p.alpha();
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let t = lindley_draw(p.theta(), rng);
        values.push((-inv_alpha * t.ln()).exp());
    }
    Sample::new(values)
}

/// One Lindley(θ) draw.  Gamma(2, θ) is taken as the sum of two
/// Exponential(θ) draws, so the whole path is exact and reproducible.
pub(crate) fn lindley_draw(theta: f64, rng: &mut RngStream) -> f64 {
    if rng.next_open01() <= theta / (1.0 + theta) {
        -rng.next_open01().ln() / theta
    } else {
        let e1 = -rng.next_open01().ln();
        let e2 = -rng.next_open01().ln();
        (e1 + e2) / theta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stream_matches_reference_sequence() {
        // Frozen from an independent implementation of the same algorithm.
        let mut s = RngStream::new(42, 7);
        assert_eq!(s.next_u64(), 0x7820_2895_000F_0FE5);
        assert_eq!(s.next_u64(), 0xDB23_C977_D711_5CE1);
        assert_eq!(s.next_u64(), 0xB2CD_E6E2_CE19_D57B);
        assert_eq!(s.next_u64(), 0x1619_BF7F_7DB9_8EDA);

        let mut s = RngStream::new(1, 0);
        assert_eq!(s.next_u64(), 0xA730_8728_AAD2_1397);
        assert_eq!(s.next_u64(), 0x541C_F052_CC48_6A38);
        assert_eq!(s.next_u64(), 0x4D8E_FB97_3C56_AD5F);
    }

    #[test]
    fn open01_matches_reference_and_stays_open() {
        let mut s = RngStream::new(42, 7);
        assert_eq!(s.next_open01(), 0.4692407001276104);
        assert_eq!(s.next_open01(), 0.856014816053237);
        assert_eq!(s.next_open01(), 0.6984543136332839);
        let mut s = RngStream::new(3, 9);
        for _ in 0..10_000 {
            let u = s.next_open01();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn identical_streams_reproduce_identically() {
        let mut a = RngStream::new(5, 11);
        let mut b = RngStream::new(5, 11);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngStream::new(5, 11);
        let mut b = RngStream::new(5, 12);
        let mut c = RngStream::new(6, 11);
        let av: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let bv: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let cv: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_ne!(av, bv);
        assert_ne!(av, cv);
    }

    #[test]
    fn empty_request_rejected() {
        let p = IplParams::new(1.0, 2.0).unwrap();
        assert!(sample_inverse_transform(&p, &mut RngStream::new(1, 0), 0).is_err());
        assert!(sample_lindley_mixture(&p, &mut RngStream::new(1, 0), 0).is_err());
    }

    #[test]
    fn inverse_transform_applies_quantile_to_stream_uniforms() {
        let p = IplParams::new(1.0, 2.0).unwrap();
        let sample = sample_inverse_transform(&p, &mut RngStream::new(9, 4), 5).unwrap();
        let mut replay = RngStream::new(9, 4);
        for &v in sample.values() {
            let u = replay.next_open01();
            assert_eq!(v, crate::model::quantile(&p, u).unwrap());
        }
    }

    #[test]
    fn mixture_transform_and_weight() {
        // θ = 1 puts weight 1/2 on the exponential component.
        assert_relative_eq!(1.0f64 / (1.0 + 1.0), 0.5);
        // Replaying the stream reproduces Y = T^{-1/α} exactly; T = 1 maps
        // to Y = 1 for any α.
        let p = IplParams::new(1.0, 2.0).unwrap();
        let sample = sample_lindley_mixture(&p, &mut RngStream::new(11, 2), 6).unwrap();
        let mut replay = RngStream::new(11, 2);
        for &v in sample.values() {
            let t = lindley_draw(1.0, &mut replay);
            assert_eq!(v, (-0.5 * t.ln()).exp());
        }
        assert_eq!((-0.5f64 * 1.0f64.ln()).exp(), 1.0);
    }

    #[test]
    fn samplers_are_deterministic_across_runs() {
        let p = IplParams::new(0.5, 1.0).unwrap();
        let a = sample_inverse_transform(&p, &mut RngStream::new(4, 0), 64).unwrap();
        let b = sample_inverse_transform(&p, &mut RngStream::new(4, 0), 64).unwrap();
        assert_eq!(a.values(), b.values());
        let c = sample_lindley_mixture(&p, &mut RngStream::new(4, 1), 64).unwrap();
        let d = sample_lindley_mixture(&p, &mut RngStream::new(4, 1), 64).unwrap();
        assert_eq!(c.values(), d.values());
    }
}
