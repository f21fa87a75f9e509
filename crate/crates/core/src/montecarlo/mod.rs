//! Seeded sampling and Kolmogorov-Smirnov distances.

mod experiment;
mod ks;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub use experiment::{analytic_nonlinearity_ks, exponential_ks_experiment, mc_error, KSRow, KSTable, DEFAULT_M};
pub use ks::{ks_two_sample, ks_vs_cdf, EmpiricalDistribution};

/// Generator behind every stochastic routine: ChaCha20 with a 64-bit stream id.
pub type StreamRng = ChaCha20Rng;

/// Independent generator for `(seed, stream)`.
///
/// The key is derived from `seed` by `SeedableRng::seed_from_u64`; `stream`
/// selects the ChaCha20 stream, so distinct streams never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}
