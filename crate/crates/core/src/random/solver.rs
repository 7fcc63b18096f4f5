//! Exact f_r on a subset of `[n]` in one streaming pass over the chains.
//!
//! Each chain of the full graph is split by absent elements into runs of
//! consecutive present elements. A present element belongs to T* when the
//! number of consecutive present elements directly below it in its chain is
//! even, which needs no look-ahead. |T*| is the sum of ⌈run/2⌉ over runs.

use std::ops::AddAssign;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{level_size, max_level, ChainWalk, Multiplier};
use crate::extremal::{blocks, BLOCK};
use crate::random::expectation::level_probability;
use crate::random::sample::{Subset, SubsetSample};

/// Levels needed for any n < 2^64 and b ≥ 2.
pub(crate) const MAX_LEVELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ScanTotals {
    pub size: u64,
    pub stars: [u64; MAX_LEVELS],
}

impl Default for ScanTotals {
    fn default() -> Self {
        ScanTotals {
            size: 0,
            stars: [0; MAX_LEVELS],
        }
    }
}

impl AddAssign for ScanTotals {
    fn add_assign(&mut self, rhs: Self) {
        self.size += rhs.size;
        for (x, y) in self.stars.iter_mut().zip(rhs.stars) {
            *x += y;
        }
    }
}

fn scan_block<S: Subset + ?Sized>(s: &S, m: Multiplier, lo: u64, hi: u64) -> ScanTotals {
    let n = s.n();
    let b = m.b();
    let mut totals = ScanTotals::default();
    for start in (lo..=hi).filter(|x| x % b != 0) {
        let mut run = 0u32;
        for (level, v) in ChainWalk::new(start, m, n).enumerate() {
            if s.contains(v) {
                if run.is_multiple_of(2) {
                    totals.stars[level] += 1;
                    totals.size += 1;
                }
                run += 1;
            } else {
                run = 0;
            }
        }
    }
    totals
}

/// Integer sums only, so the result does not depend on how rayon splits the work.
pub(crate) fn scan<S: Subset + ?Sized>(s: &S, m: Multiplier) -> ScanTotals {
    if s.n() <= BLOCK {
        return scan_block(s, m, 1, s.n());
    }
    blocks(s.n())
        .map(|(lo, hi)| scan_block(s, m, lo, hi))
        .reduce(ScanTotals::default, |mut acc, t| {
            acc += t;
            acc
        })
}

/// f_r of the present elements: Σ over present runs of ⌈run/2⌉.
pub fn max_set_size_in_subset<S: Subset + ?Sized>(s: &S, m: Multiplier) -> u64 {
    scan(s, m).size
}

/// |T*_i| for every level 0 ≤ i ≤ ⌊log_b n⌋; empty when n = 0.
pub fn star_counts<S: Subset + ?Sized>(s: &S, m: Multiplier) -> Vec<u64> {
    let levels = max_level(s.n(), m.b()).map_or(0, |l| l as usize + 1);
    scan(s, m).stars[..levels].to_vec()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelStats {
    pub level: u32,
    /// |T_i|
    pub level_total: u64,
    /// |T*_i| in the sample
    pub star_count: u64,
    /// π_i
    pub probability: f64,
    /// E|T*_i| = |T_i|·π_i
    pub expected: f64,
}

pub fn level_counts(sample: &SubsetSample, m: Multiplier) -> Vec<LevelStats> {
    let n = sample.n();
    let p = sample.p();
    star_counts(sample, m)
        .into_iter()
        .enumerate()
        .map(|(i, star_count)| {
            let level = i as u32;
            let level_total = level_size(n, m.b(), level).expect("level within range");
            let probability = level_probability(level, p);
            LevelStats {
                level,
                level_total,
                star_count,
                probability,
                expected: level_total as f64 * probability,
            }
        })
        .collect()
}
