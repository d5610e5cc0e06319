//! SplitMix64, a counter-based 64-bit generator, plus seed derivation.
//!
//! The `k`-th output for seed `s` is `mix(s + k·γ)` with
//! `γ = 0x9E3779B97F4A7C15` and the finalizer
//!
//! ```text
//! z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//! z ^= z >> 27; z *= 0x94D049BB133111EB;
//! z ^= z >> 31;
//! ```
//!
//! (wrapping arithmetic). Uniform doubles take the top 53 bits; Gaussians
//! come from the Box–Muller transform, consuming two uniforms per pair.
//! Child seeds are derived by hashing, never by drawing from a parent stream:
//! `derive_seed(s, [t1, .., tk]) = h_k` with `h_0 = mix(s ^ γ)` and
//! `h_i = mix(h_{i-1} ^ mix(t_i + γ))`.

use num_complex::Complex;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(mix64(master ^ GAMMA), |h, &t| mix64(h ^ mix64(t.wrapping_add(GAMMA))))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Two independent standard normals.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = std::f64::consts::TAU * u2;
        (r * t.cos(), r * t.sin())
    }

    pub fn gaussian(&mut self) -> f64 {
        self.gaussian_pair().0
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_gaussian(&mut self) -> Complex<f64> {
        let (a, b) = self.gaussian_pair();
        Complex::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }
}
