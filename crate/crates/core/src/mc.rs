//! Monte Carlo plumbing: seeded random streams, replicate fan-out and
//! binomial proportions.
//!
//! Every replicate draws from its own ChaCha8 stream keyed by
//! `(master seed, replicate index)`, so results do not depend on how
//! replicates are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// The generator behind every simulation in the crate.
pub type SimRng = ChaCha8Rng;

/// Environment variable capping replicate parallelism (0 = let rayon decide).
pub const THREADS_ENV: &str = "MAXFLOW_THREADS";

/// Independent stream `index` derived from `seed`.
pub fn stream(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mixes a tag into a seed (splitmix64 finalizer), for sub-experiments that
/// need streams disjoint from their parent's.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Replicate runner with a bounded thread count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Runner {
    threads: usize,
}

impl Runner {
    pub fn new(threads: usize) -> Self {
        Self { threads }
    }

    /// Reads `MAXFLOW_THREADS`; unset or unparsable means auto.
    pub fn from_env() -> Self {
        let threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(0);
        Self { threads }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// Evaluates `f(0..reps)` in parallel and returns results in index order.
    pub fn map<T, F>(&self, reps: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        if self.threads == 1 || reps < 2 {
            return (0..reps).map(f).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .expect("thread pool construction");
        pool.install(|| (0..reps).into_par_iter().map(f).collect())
    }
}

/// A Monte Carlo estimate of a probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn new(hits: u64, trials: u64) -> Self {
        debug_assert!(hits <= trials);
        Self { hits, trials }
    }

    pub fn from_flags(flags: impl IntoIterator<Item = bool>) -> Self {
        let (mut hits, mut trials) = (0, 0);
        for f in flags {
            trials += 1;
            hits += u64::from(f);
        }
        Self { hits, trials }
    }

    pub fn estimate(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.hits as f64 / self.trials as f64
    }

    /// Binomial standard error `sqrt(p(1-p)/N)`.
    pub fn stderr(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.estimate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `sample` and `cdf`.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0_f64, |acc, (i, &x)| {
        let f = cdf(x);
        let lo = (f - i as f64 / n).abs();
        let hi = ((i + 1) as f64 / n - f).abs();
        acc.max(lo).max(hi)
    })
}

/// Empirical quantile by the inverse of the empirical CDF (order statistic
/// `ceil(p·N)`); `sorted` must be ascending.
pub fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    let k = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[k - 1]
}
