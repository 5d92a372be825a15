use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Explicitly seeded random stream.
///
/// Backed by ChaCha8, whose output is identical on every platform. A
/// `(seed, stream)` pair selects an independent sequence, so per-image work
/// can run in any order or thread and still reproduce.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            inner,
            seed,
            stream,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform real in `[0, 1)` from exactly one 64-bit draw.
    pub fn unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform real in `[lo, hi)`; consumes exactly one draw.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidRange { lo, hi });
        }
        Ok(self.uniform_unchecked(lo, hi))
    }

    /// Like [`uniform`](Self::uniform) but returns `lo` when `lo == hi`.
    /// Still consumes one draw so the draw count does not depend on the range.
    pub(crate) fn uniform_closed(&mut self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo <= hi);
        if lo == hi {
            self.inner.next_u64();
            lo
        } else {
            self.uniform_unchecked(lo, hi)
        }
    }

    fn uniform_unchecked(&mut self, lo: f64, hi: f64) -> f64 {
        let v = lo + (hi - lo) * self.unit();
        // lo + span * u can round up to hi for u close to 1
        if v >= hi {
            hi.next_down()
        } else {
            v
        }
    }

    /// Uniform integer in `[0, n)`. Panics if `n == 0`.
    pub fn below(&mut self, n: u32) -> u32 {
        self.inner.random_range(0..n)
    }

    pub fn below_usize(&mut self, n: usize) -> usize {
        let n = u32::try_from(n).expect("range exceeds u32");
        self.below(n) as usize
    }

    /// Bernoulli trial that fires with probability `p`. Degenerate
    /// probabilities (`p <= 0` or `p >= 1`) consume no randomness.
    pub fn chance(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            // keep when draw >= p
            self.unit() < p
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Partial Fisher-Yates: returns `k` distinct indices from `0..n` in draw order.
    pub fn choose_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below_usize(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
