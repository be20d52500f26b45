//! Counter-based seeded random streams.
//!
//! Each [`SeededRng`] is a ChaCha8 keystream. The 256-bit key is the SplitMix64
//! expansion of `master_seed` (four successive outputs, little-endian), the
//! 64-bit stream (nonce) is `stream_id`, and the block counter starts at 0.
//! Gaussian variates use Box-Muller with the portable `libm` transcendental
//! functions so sample sequences are identical on every platform.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::matrix::ComplexVector;
use crate::error::{invalid, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a sequence of tags into a new 64-bit seed.
///
/// Used to give every experiment grid point its own family of streams.
pub fn derive_seed(master_seed: u64, tags: &[u64]) -> u64 {
    let mut state = master_seed;
    let mut out = splitmix64(&mut state);
    for &t in tags {
        state ^= t.wrapping_mul(GOLDEN_GAMMA).rotate_left(17);
        out ^= splitmix64(&mut state);
        state = out;
    }
    out
}

/// A reproducible random stream identified by `(master_seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct SeededRng {
    master_seed: u64,
    stream_id: u64,
    core: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut state = master_seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut core = ChaCha8Rng::from_seed(key);
        core.set_stream(stream_id);
        SeededRng { master_seed, stream_id, core }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    #[inline]
    pub fn open01(&mut self) -> f64 {
        ((self.core.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound` (Lemire's multiply-shift with rejection).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.core.next_u64();
            let wide = (x as u128) * (bound as u128);
            if (wide as u64) >= threshold {
                return (wide >> 64) as u64;
            }
        }
    }

    /// Two independent standard normal variates (Box-Muller).
    #[inline]
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.open01();
        let u2 = self.open01();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * libm::cos(angle), radius * libm::sin(angle))
    }

    /// One CN(0, variance) draw: real and imaginary parts i.i.d. N(0, variance/2).
    #[inline]
    pub fn complex_gaussian(&mut self, variance: f64) -> Complex64 {
        let scale = (variance / 2.0).sqrt();
        let (a, b) = self.normal_pair();
        Complex64::new(a * scale, b * scale)
    }

    pub(crate) fn fill_complex_gaussian(&mut self, out: &mut [Complex64], variance: f64) {
        for z in out {
            *z = self.complex_gaussian(variance);
        }
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.core.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.core.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.core.fill_bytes(dst)
    }
}

/// Draws a vector of `dim` i.i.d. CN(0, `variance`) entries.
pub fn sample_complex_gaussian(rng: &mut SeededRng, dim: usize, variance: f64) -> Result<ComplexVector> {
    if dim == 0 {
        return Err(invalid("dim must be at least 1"));
    }
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(invalid(format!("variance must be positive and finite, got {variance}")));
    }
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    rng.fill_complex_gaussian(&mut v, variance);
    Ok(ComplexVector::new(v))
}
