use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic generator behind swarm placement.
///
/// The stream is ChaCha8 keyed by `ChaCha8Rng::seed_from_u64(seed)` with the
/// 64-bit stream id selecting an independent sequence, so separate placement
/// runs can share a seed without sharing draws. ChaCha output is specified
/// bit-for-bit, which makes layouts identical on every platform.
///
/// Derived variates:
/// * uniform: `(next_u64() >> 11) · 2⁻⁵³`, in `[0, 1)`.
/// * normal pair: Box–Muller on two uniforms `u₁, u₂` (in that draw order),
///   `ρ = √(−2·ln(1 − u₁))`, `(ρ·cos 2πu₂, ρ·sin 2πu₂)`, with the
///   transcendental functions taken from `libm` for portable rounding.
#[derive(Clone, Debug)]
pub struct SwarmRng {
    inner: ChaCha8Rng,
}

impl SwarmRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SwarmRng { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normal variates.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let rho = libm::sqrt(-2.0 * libm::log(1.0 - u1));
        let angle = std::f64::consts::TAU * u2;
        (rho * libm::cos(angle), rho * libm::sin(angle))
    }
}
