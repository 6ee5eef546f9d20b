//! Deterministic random numbers for Monte Carlo estimates.
//!
//! All stochastic estimates in this crate draw from ChaCha8, a counter-based
//! stream cipher, seeded from a caller-supplied 64-bit seed. Substreams are
//! selected with [`ChaCha8Rng::set_stream`], which lets a sample budget be
//! partitioned across workers in fixed-size batches with results identical to
//! a single-threaded run: batch `k` always consumes substream `k`, regardless
//! of which worker executes it.
//!
//! Uniform doubles use the usual 53-bit mantissa construction
//! `(next_u64 >> 11) * 2^-53`, which is exact and platform-independent.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of samples consumed from one substream before moving to the next.
/// Fixing this constant is what makes parallel and sequential Monte Carlo
/// runs bit-identical.
pub const BATCH_SIZE: u64 = 1 << 16;

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Seeded, substream-addressable generator.
#[derive(Clone, Debug)]
pub struct McRng {
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl McRng {
    /// Generator for substream 0 of `seed`.
    pub fn seeded(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Generator positioned at the start of `stream` under `seed`.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        McRng {
            inner,
            spare_normal: None,
        }
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * INV_2_53
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box–Muller (pairs cached).
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - u ∈ (0, 1] keeps the log argument away from zero.
        let r = (-2.0 * (1.0 - self.uniform()).ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.uniform();
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Uniform point in the unit ball of dimension `dim`, via a normal
    /// direction scaled by `u^(1/dim)`.
    pub fn in_unit_ball(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let g: Vec<f64> = (0..dim).map(|_| self.normal()).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-300 {
                let radius = self.uniform().powf(1.0 / dim as f64);
                return g.iter().map(|v| v / norm * radius).collect();
            }
        }
    }

    /// Uniform direction on the unit sphere of dimension `dim`.
    pub fn unit_direction(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let g: Vec<f64> = (0..dim).map(|_| self.normal()).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-300 {
                return g.iter().map(|v| v / norm).collect();
            }
        }
    }
}
