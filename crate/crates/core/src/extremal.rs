//! The dense problem: maximum multiple-free subsets of `[n]`.
//!
//! Also hosts the two brute-force oracles every other solver is checked
//! against. [`brute_force_max`] enumerates subsets and knows nothing about
//! chains; [`path_dp_max`] finds the induced paths from set membership alone
//! and runs a take/skip dynamic program on each.

use std::collections::HashSet;

use num::{BigInt, One};
use rayon::prelude::*;

use crate::chain::{chain_len, predecessor, ChainWalk, Multiplier};
use crate::error::{Error, Result};
use crate::Rational;

/// Largest input accepted by [`brute_force_max`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

pub(crate) const BLOCK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalResult {
    /// f_{b/a}(n).
    pub size: u64,
    /// A canonical maximum set, the even-position elements of every chain, sorted.
    pub witness: Option<Vec<u64>>,
    /// size − b·n/(b+1), exactly.
    pub residual: Rational,
}

/// True iff no x, y in `s` satisfy b·x = a·y.
pub fn is_multiple_free(s: &[u64], m: Multiplier) -> bool {
    let members: HashSet<u64> = s.iter().copied().collect();
    s.iter().all(|&x| {
        x % m.a() != 0
            || (x / m.a())
                .checked_mul(m.b())
                .is_none_or(|y| !members.contains(&y))
    })
}

/// Splits `[1, n]` into fixed blocks so parallel reductions see the same
/// work units whatever the thread count.
pub(crate) fn blocks(n: u64) -> impl ParallelIterator<Item = (u64, u64)> {
    let count = n.div_ceil(BLOCK);
    (0..count).into_par_iter().map(move |k| {
        let lo = k * BLOCK + 1;
        (lo, (lo + BLOCK - 1).min(n))
    })
}

/// f_{b/a}(n) = Σ over chains of ⌈length/2⌉.
pub fn max_set_size(n: u64, m: Multiplier) -> u64 {
    let b = m.b();
    blocks(n)
        .map(|(lo, hi)| {
            (lo..=hi)
                .filter(|s| s % b != 0)
                .map(|s| chain_len(s, m, n).div_ceil(2) as u64)
                .sum::<u64>()
        })
        .sum()
}

/// The canonical maximum multiple-free subset of `[n]`.
pub fn max_set(n: u64, m: Multiplier) -> ExtremalResult {
    let b = m.b();
    let mut witness: Vec<u64> = blocks(n)
        .flat_map_iter(|(lo, hi)| {
            (lo..=hi)
                .filter(move |s| s % b != 0)
                .flat_map(move |s| ChainWalk::new(s, m, n).step_by(2))
                .collect::<Vec<_>>()
        })
        .collect();
    witness.sort_unstable();
    let size = witness.len() as u64;
    ExtremalResult {
        size,
        witness: Some(witness),
        residual: residual_of(size, n, m),
    }
}

/// [`max_set`] without materializing the witness.
pub fn max_set_summary(n: u64, m: Multiplier) -> ExtremalResult {
    let size = max_set_size(n, m);
    ExtremalResult {
        size,
        witness: None,
        residual: residual_of(size, n, m),
    }
}

/// f_{b/a}(n) − b·n/(b+1) as an exact rational.
pub fn dense_residual(n: u64, m: Multiplier) -> Rational {
    residual_of(max_set_size(n, m), n, m)
}

fn residual_of(size: u64, n: u64, m: Multiplier) -> Rational {
    let b = BigInt::from(m.b());
    let main = Rational::new(&b * BigInt::from(n), b + BigInt::one());
    Rational::from_integer(BigInt::from(size)) - main
}

fn dedup_sorted(elements: &[u64]) -> Vec<u64> {
    let mut v = elements.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Maximum multiple-free subset size by exhaustive subset enumeration.
pub fn brute_force_max(elements: &[u64], m: Multiplier) -> Result<u64> {
    let xs = dedup_sorted(elements);
    if xs.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLargeForOracle {
            size: xs.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let (a, b) = (m.a() as u128, m.b() as u128);
    let mut arcs = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            if b * x as u128 == a * y as u128 {
                arcs.push((1u32 << i) | (1u32 << j));
            }
        }
    }
    let mut best = 0u32;
    for mask in 0u32..(1u32 << xs.len()) {
        let size = mask.count_ones();
        if size > best && arcs.iter().all(|&arc| mask & arc != arc) {
            best = size;
        }
    }
    Ok(best as u64)
}

/// Maximum multiple-free subset size by a take/skip DP on each induced path.
///
/// Components are discovered from set membership: a component begins at an
/// element whose predecessor is absent and follows present successors.
pub fn path_dp_max(elements: &[u64], m: Multiplier) -> u64 {
    let xs = dedup_sorted(elements);
    let present: HashSet<u64> = xs.iter().copied().collect();
    let next = |x: u64| {
        x.is_multiple_of(m.a())
            .then(|| (x / m.a()).checked_mul(m.b()))
            .flatten()
            .filter(|y| present.contains(y))
    };
    let mut total = 0u64;
    for &x in &xs {
        if predecessor(x, m).is_some_and(|p| present.contains(&p)) {
            continue;
        }
        // (best with current taken, best with current skipped)
        let (mut take, mut skip) = (1u64, 0u64);
        let mut cur = x;
        while let Some(y) = next(cur) {
            (take, skip) = (skip + 1, take.max(skip));
            cur = y;
        }
        total += take.max(skip);
    }
    total
}
