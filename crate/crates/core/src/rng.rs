//! Reproducible per-path random streams.
//!
//! Path `p` under master seed `s` draws from ChaCha8 keyed by
//! `seed_from_u64(s)` on stream number `p`. Uniforms are
//! `((u >> 11) + 0.5) · 2⁻⁵³` for successive 64-bit outputs `u`, which keeps
//! them strictly inside `(0, 1)`. Normals are `Φ⁻¹(uniform)`, one uniform per
//! normal. None of this depends on thread count or scheduling, so the same
//! `(seed, path)` yields the same numbers everywhere.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RngSeedPolicy {
    pub master_seed: u64,
}

impl RngSeedPolicy {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn stream(&self, path: u64) -> PathStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(path);
        PathStream {
            rng,
            normal: Normal::standard(),
        }
    }
}

pub struct PathStream {
    rng: ChaCha8Rng,
    normal: Normal,
}

impl PathStream {
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        let u = self.uniform();
        self.normal.inverse_cdf(u)
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.normal();
        }
    }
}
