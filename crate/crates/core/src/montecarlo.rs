//! Seeded trajectory sampling for the classical games.
//!
//! Every trajectory draws from its own ChaCha20 stream: the key comes from
//! the seed, the stream id is the run index, and play `k` consumes the
//! `k`-th 64-bit word. Any run can be replayed on its own, and runs can be
//! sampled in any order or in parallel.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::classical::{FlashSchedule, GameSuite};
use crate::error::{Error, Result};

/// Recorded in output metadata alongside the seed.
pub const RNG_NAME: &str =
    "chacha20 (rand_chacha 0.3); key=seed_from_u64(seed), stream=run_index, word=play; u=(w>>11)*2^-53";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub runs: u64,
    pub steps: u64,
    pub suite: GameSuite,
    pub schedule: FlashSchedule,
}

impl RunConfig {
    pub fn new(seed: u64, runs: u64, steps: u64, suite: GameSuite, schedule: FlashSchedule) -> Result<Self> {
        if runs == 0 {
            return Err(Error::NoRuns);
        }
        Ok(Self {
            seed,
            runs,
            steps,
            suite,
            schedule,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    /// Sample standard deviation over `√runs`; 0 when `runs == 1`.
    pub std_error: f64,
    pub runs: u64,
    /// Set when a single run makes the standard error undefined.
    pub degenerate: bool,
}

#[inline]
fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Final payoff of trajectory `run_index`, starting from 0.
pub fn sample_trajectory(cfg: &RunConfig, run_index: u64) -> i64 {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    rng.set_stream(run_index);
    let mut x = 0i64;
    for k in 0..cfg.steps {
        let q = cfg.suite.heads(cfg.schedule.label_at(k), x);
        if unit_f64(rng.next_u64()) < q {
            x += 1;
        } else {
            x -= 1;
        }
    }
    x
}

/// Mean and standard error of the final payoff over all runs.
///
/// Payoffs are integers, so sums are accumulated exactly and the result
/// does not depend on how trajectories are scheduled across threads.
pub fn estimate_expected_payoff(cfg: &RunConfig) -> SampleStats {
    let finals: Vec<i64> = (0..cfg.runs)
        .into_par_iter()
        .map(|i| sample_trajectory(cfg, i))
        .collect();
    let n = finals.len() as i128;
    let sum: i128 = finals.iter().map(|&x| x as i128).sum();
    let sum_sq: i128 = finals.iter().map(|&x| (x as i128) * (x as i128)).sum();
    let mean = sum as f64 / n as f64;
    if n == 1 {
        return SampleStats {
            mean,
            std_error: 0.0,
            runs: 1,
            degenerate: true,
        };
    }
    // n Σx² - (Σx)² is exact in i128.
    let centered = (n * sum_sq - sum * sum) as f64;
    let var = centered / (n as f64 * (n - 1) as f64);
    SampleStats {
        mean,
        std_error: (var / n as f64).sqrt(),
        runs: cfg.runs,
        degenerate: false,
    }
}
