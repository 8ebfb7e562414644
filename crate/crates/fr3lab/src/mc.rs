//! Seeding and summation helpers for reproducible Monte Carlo runs.
//!
//! Every Monte Carlo operation in this crate derives one independent RNG
//! stream per trial from a single master seed. Trials can therefore be
//! evaluated in any order (or in parallel) and still produce identical
//! results, as long as aggregation folds the per-trial outputs in trial
//! order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for one trial of a seeded Monte Carlo run.
///
/// All trials share the master seed as the ChaCha key and are separated by
/// the stream counter, so streams are independent and cheap to construct.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Neumaier-compensated accumulator.
///
/// Keeps a running correction term so that long sums of small terms stay
/// accurate and bitwise reproducible under a fixed summation order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    correction: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.correction += (self.sum - t) + value;
        } else {
            self.correction += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.correction
    }
}

/// Compensated mean of a slice, folded in index order.
pub fn compensated_mean(values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.total() / values.len() as f64
}

/// Unbiased sample variance via a compensated two-pass sweep.
///
/// Returns 0 for slices with fewer than two entries.
pub fn compensated_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = compensated_mean(values);
    let mut acc = CompensatedSum::new();
    for &v in values {
        let d = v - mean;
        acc.add(d * d);
    }
    acc.total() / (values.len() - 1) as f64
}
