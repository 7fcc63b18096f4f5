//! Repeated trials of f_r([n]_p) with aggregate statistics.
//!
//! Trial t samples membership from the stream (seed, t). Each trial streams
//! over the chains in fixed blocks and reduces integer counts. Results are
//! therefore bit-identical for any rayon pool size.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{max_level, Multiplier};
use crate::error::{Error, Result};
use crate::random::bounds::concentration_envelope;
use crate::random::expectation::{expected_level, expected_total};
use crate::random::sample::{sample_subset, SampleSpec};
use crate::random::solver::{scan, ScanTotals};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub p: f64,
    pub seed: u64,
    pub trials: u64,
    /// f_r([n]_p) for trials 0, 1, …
    pub sizes: Vec<u64>,
    pub mean: f64,
    /// Unbiased (n − 1) standard deviation; 0 for a single trial.
    pub sample_stddev: f64,
    /// Mean |T*_i| over trials, one entry per level.
    pub per_level_means: Vec<f64>,
    /// E|T*_i|, one entry per level.
    pub per_level_expected: Vec<f64>,
    /// E|T*|.
    pub analytic_total: f64,
    /// √(pn)·ln n·ln ln n, the envelope at c = 1. Absent for n < 16 or p = 0.
    pub envelope: Option<f64>,
    /// max_t |size_t − mean|.
    pub max_deviation: f64,
    /// max_deviation / envelope, the smallest c the run supports.
    pub fitted_constant: Option<f64>,
}

impl TrialSummary {
    /// Envelope at a caller-chosen constant.
    pub fn envelope_at(&self, c: f64) -> Option<f64> {
        self.envelope.map(|e| e * c)
    }

    /// max_deviation / √(pn).
    pub fn deviation_over_sqrt_pn(&self) -> f64 {
        self.max_deviation / (self.p * self.n as f64).sqrt()
    }
}

pub fn monte_carlo(n: u64, m: Multiplier, p: f64, trials: u64, seed: u64) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::DomainError("monte_carlo needs trials >= 1".into()));
    }
    let samples = (0..trials)
        .map(|trial| sample_subset(SampleSpec::new(n, p, seed, trial)?))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<ScanTotals> = samples.par_iter().map(|s| scan(s, m)).collect();

    let levels = max_level(n, m.b()).map_or(0, |l| l as usize + 1);
    let sizes: Vec<u64> = results.iter().map(|t| t.size).collect();
    let count = trials as f64;
    let mean = (sizes.iter().map(|&s| s as u128).sum::<u128>() as f64) / count;
    let sample_stddev = if trials > 1 {
        let ss: f64 = sizes.iter().map(|&s| (s as f64 - mean).powi(2)).sum();
        (ss / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    let per_level_means = (0..levels)
        .map(|i| results.iter().map(|t| t.stars[i] as u128).sum::<u128>() as f64 / count)
        .collect();
    let per_level_expected = (0..levels)
        .map(|i| expected_level(n, m, p, i as u32))
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = sizes
        .iter()
        .map(|&s| (s as f64 - mean).abs())
        .fold(0.0, f64::max);
    let envelope = concentration_envelope(n, p, 1.0).ok();

    Ok(TrialSummary {
        n,
        a: m.a(),
        b: m.b(),
        p,
        seed,
        trials,
        sizes,
        mean,
        sample_stddev,
        per_level_means,
        per_level_expected,
        analytic_total: expected_total(n, m, p)?,
        envelope,
        max_deviation,
        fitted_constant: envelope.map(|e| max_deviation / e),
    })
}
