use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{domain, Result};

/// A reproducible random stream identified by `(seed, stream_id)`.
///
/// Backed by ChaCha8, whose 64-bit stream selector gives 2^64 independent
/// sequences per seed. Each replicate gets its own stream, so replicates can
/// run on any thread in any order and still draw identical numbers.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    /// Stream for replicate `replicate` of parameter cell `cell`.
    pub fn for_cell(seed: u64, cell: u32, replicate: u32) -> Self {
        Self::new(seed, (u64::from(cell) << 32) | u64::from(replicate))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    #[inline]
    pub(crate) fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Exp(1) draw, strictly positive.
    #[inline]
    pub(crate) fn standard_exponential(&mut self) -> f64 {
        loop {
            let e: f64 = self.rng.sample(Exp1);
            if e > 0.0 {
                return e;
            }
        }
    }

    /// Uniform draw on [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Uniform index in `0..n`.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

/// Draw from N(mean, variance). A zero variance returns `mean` exactly.
pub fn sample_gaussian(stream: &mut RngStream, mean: f64, variance: f64) -> Result<f64> {
    if !(variance >= 0.0) {
        return domain(format!("variance must be >= 0, got {variance}"));
    }
    if variance == 0.0 {
        return Ok(mean);
    }
    Ok(mean + variance.sqrt() * stream.standard_normal())
}

/// Draw from Exp(rate), strictly positive.
pub fn sample_exponential(stream: &mut RngStream, rate: f64) -> Result<f64> {
    if !(rate > 0.0) || !rate.is_finite() {
        return domain(format!("rate must be > 0, got {rate}"));
    }
    Ok(stream.standard_exponential() / rate)
}
