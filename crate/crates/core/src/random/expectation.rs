//! Per-level probabilities π_i and the expectations E|T*_i|, E|T*|.
//!
//! An element at level i has exactly i predecessors, all inside `[n]`, and
//! lies in T* when it is present and the run of present elements directly
//! below it has even length. Summing the geometric series gives
//!
//! ```text
//! π_i = p·(1 + (−1)^i·p^(i+1)) / (1 + p)
//! ```
//!
//! which is evaluated directly in f64. At p = 1 the limits (1 for even i,
//! 0 for odd i) are returned exactly.

use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::chain::{chain_from, chain_starts, level_size, max_level, Multiplier};
use crate::error::{Error, Result};
use crate::random::sample::{check_probability, MaskSubset};
use crate::random::solver::max_set_size_in_subset;
use crate::Rational;

/// Largest n accepted by the flat exhaustive enumerations.
pub const EXHAUSTIVE_LIMIT: u64 = 20;

/// Largest n accepted by the per-chain enumeration.
pub const PER_CHAIN_LIMIT: u64 = 1 << 16;

/// π_i, the probability that an element of T_i lands in T*_i.
pub fn level_probability(i: u32, p: f64) -> f64 {
    if p == 1.0 {
        return if i.is_multiple_of(2) { 1.0 } else { 0.0 };
    }
    let tail = p.powi(i as i32 + 1);
    let signed = if i.is_multiple_of(2) {
        1.0 + tail
    } else {
        1.0 - tail
    };
    p * signed / (1.0 + p)
}

/// π_i in exact arithmetic, from the unsimplified geometric-series forms
/// p·[(1−p)(1−p^i)/(1−p²) + p^i] (even i) and p(1−p)(1−p^(i+1))/(1−p²) (odd i).
pub fn level_probability_exact(i: u32, p: &Rational) -> Rational {
    let one = Rational::one();
    if *p == one {
        return if i.is_multiple_of(2) {
            one
        } else {
            Rational::zero()
        };
    }
    let q = &one - p;
    let denom = &one - p * p;
    if i.is_multiple_of(2) {
        let pi = num::pow(p.clone(), i as usize);
        p * (&q * (&one - &pi) / &denom + pi)
    } else {
        let pi1 = num::pow(p.clone(), i as usize + 1);
        p * &q * (&one - pi1) / denom
    }
}

/// E|T*_i| = |T_i|·π_i.
pub fn expected_level(n: u64, m: Multiplier, p: f64, i: u32) -> Result<f64> {
    check_probability(p)?;
    Ok(level_size(n, m.b(), i)? as f64 * level_probability(i, p))
}

/// E|T*| = Σ_{i=0}^{⌊log_b n⌋} E|T*_i|.
pub fn expected_total(n: u64, m: Multiplier, p: f64) -> Result<f64> {
    check_probability(p)?;
    let Some(top) = max_level(n, m.b()) else {
        return Ok(0.0);
    };
    (0..=top).map(|i| expected_level(n, m, p, i)).sum()
}

pub fn expected_total_exact(n: u64, m: Multiplier, p: &Rational) -> Result<Rational> {
    check_rational_probability(p)?;
    let Some(top) = max_level(n, m.b()) else {
        return Ok(Rational::zero());
    };
    let mut total = Rational::zero();
    for i in 0..=top {
        let size = Rational::from_integer(BigInt::from(level_size(n, m.b(), i)?));
        total += size * level_probability_exact(i, p);
    }
    Ok(total)
}

/// The smoothed per-level mean (b−1)/(b(1+p))·p·n·(b^(−i) + (−p/b)^i·p),
/// which differs from [`expected_level`] only through the rounding of |T_i|.
pub fn unified_closed_form(n: u64, b: u64, p: f64, i: u32) -> f64 {
    let b = b as f64;
    let n = n as f64;
    (b - 1.0) / (b * (1.0 + p)) * p * n * (b.powi(-(i as i32)) + (-p / b).powi(i as i32) * p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// 0 ≤ i ≤ ⌊0.9·log_b n⌋: |T*_i| is large and concentrates around its mean.
    Low,
    /// Higher levels, where |T*_i| is small.
    High,
}

/// Diagnostic split of the levels at ⌊0.9·log_b n⌋.
pub fn level_regime(i: u32, n: u64, b: u64) -> Regime {
    let split = (0.9 * (n as f64).ln() / (b as f64).ln()).floor();
    if (i as f64) <= split {
        Regime::Low
    } else {
        Regime::High
    }
}

fn check_rational_probability(p: &Rational) -> Result<()> {
    if *p < Rational::zero() || *p > Rational::one() {
        return Err(Error::DomainError(format!(
            "probability {p} is not in [0, 1]"
        )));
    }
    Ok(())
}

fn check_exhaustive(n: u64, limit: u64) -> Result<()> {
    if n > limit {
        return Err(Error::TooLargeForOracle {
            size: n as usize,
            limit: limit as usize,
        });
    }
    Ok(())
}

/// E f_r([n]_p) by summing over all 2^n subsets, weighted by p^|S|(1−p)^(n−|S|).
pub fn exhaustive_expectation(n: u64, m: Multiplier, p: f64) -> Result<f64> {
    check_probability(p)?;
    check_exhaustive(n, EXHAUSTIVE_LIMIT)?;
    let weights: Vec<f64> = (0..=n as i32)
        .map(|k| p.powi(k) * (1.0 - p).powi(n as i32 - k))
        .collect();
    let mut total = 0.0;
    for mask in 0..(1u64 << n) {
        let size = max_set_size_in_subset(&MaskSubset { n, mask }, m);
        total += weights[mask.count_ones() as usize] * size as f64;
    }
    Ok(total)
}

pub fn exhaustive_expectation_exact(n: u64, m: Multiplier, p: &Rational) -> Result<Rational> {
    check_rational_probability(p)?;
    check_exhaustive(n, EXHAUSTIVE_LIMIT)?;
    let q = Rational::one() - p;
    let weights: Vec<Rational> = (0..=n as usize)
        .map(|k| num::pow(p.clone(), k) * num::pow(q.clone(), n as usize - k))
        .collect();
    // group by (|S|, size) first to keep the number of big-rational products small
    let mut counts = vec![vec![0u64; n as usize + 1]; n as usize + 1];
    for mask in 0..(1u64 << n) {
        let size = max_set_size_in_subset(&MaskSubset { n, mask }, m);
        counts[mask.count_ones() as usize][size as usize] += 1;
    }
    let mut total = Rational::zero();
    for (k, row) in counts.iter().enumerate() {
        let weighted: u64 = row.iter().enumerate().map(|(s, &c)| s as u64 * c).sum();
        total += &weights[k] * Rational::from_integer(BigInt::from(weighted));
    }
    Ok(total)
}

/// E f_r([n]_p) as a sum over chains of the exhaustive per-chain expectation
/// Σ_{S ⊆ chain} P(S)·Σ_runs ⌈run/2⌉.
pub fn exhaustive_expectation_per_chain(n: u64, m: Multiplier, p: f64) -> Result<f64> {
    check_probability(p)?;
    check_exhaustive(n, PER_CHAIN_LIMIT)?;
    let mut total = 0.0;
    for start in chain_starts(n, m) {
        let len = chain_from(start, m, n)?.len() as u32;
        let mut chain_total = 0.0;
        for mask in 0u64..(1u64 << len) {
            let k = mask.count_ones() as i32;
            let weight = p.powi(k) * (1.0 - p).powi(len as i32 - k);
            let mut best = 0u32;
            let mut run = 0u32;
            for j in 0..len {
                if (mask >> j) & 1 == 1 {
                    run += 1;
                } else {
                    best += run.div_ceil(2);
                    run = 0;
                }
            }
            best += run.div_ceil(2);
            chain_total += weight * best as f64;
        }
        total += chain_total;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::reduce_multiplier;
    use crate::extremal::max_set_size;
    use num::ToPrimitive;

    fn r(b: u64, a: u64) -> Multiplier {
        reduce_multiplier(b, a).unwrap()
    }

    fn q(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn probability_examples() {
        for &p in &[0.0, 0.1, 0.5, 0.9, 1.0] {
            assert_eq!(level_probability(0, p), p);
            assert!((level_probability(1, p) - p * (1.0 - p)).abs() < 1e-15);
            assert!((level_probability(2, p) - p * ((1.0 - p) + p * p)).abs() < 1e-15);
        }
        assert_eq!(level_probability(7, 1.0), 0.0);
        assert_eq!(level_probability(8, 1.0), 1.0);
    }

    #[test]
    fn exact_probability_matches_float() {
        for (num, den) in [(1, 4), (1, 2), (3, 4), (1, 1), (0, 1)] {
            let pr = q(num, den);
            let pf = num as f64 / den as f64;
            for i in 0..=20 {
                let exact = level_probability_exact(i, &pr).to_f64().unwrap();
                assert!((exact - level_probability(i, pf)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn anchored_expectation() {
        let m = r(2, 1);
        // |T_2| = 1, π_2(1/2) = 3/8
        assert!((expected_level(4, m, 0.5, 2).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(expected_total(4, m, 0.5).unwrap(), 1.625);
        assert_eq!(expected_total_exact(4, m, &q(1, 2)).unwrap(), q(13, 8));
        assert_eq!(exhaustive_expectation(4, m, 0.5).unwrap(), 1.625);
        assert_eq!(
            exhaustive_expectation_exact(4, m, &q(1, 2)).unwrap(),
            q(13, 8)
        );
        assert_eq!(exhaustive_expectation_per_chain(4, m, 0.5).unwrap(), 1.625);
    }

    #[test]
    fn degenerate_probabilities() {
        for m in [r(2, 1), r(3, 1), r(3, 2), r(7, 4)] {
            for n in [1u64, 10, 1000, 123_456] {
                assert_eq!(expected_total(n, m, 0.0).unwrap(), 0.0);
                assert_eq!(
                    expected_total(n, m, 1.0).unwrap(),
                    max_set_size(n, m) as f64
                );
                assert_eq!(expected_level(n, m, 1.0, 1).unwrap_or(0.0), 0.0);
            }
        }
        assert_eq!(exhaustive_expectation(1, r(5, 2), 0.3).unwrap(), 0.3);
        assert_eq!(
            exhaustive_expectation(12, r(3, 2), 1.0).unwrap(),
            max_set_size(12, r(3, 2)) as f64
        );
        assert_eq!(expected_total(0, r(2, 1), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            expected_level(10, r(2, 1), 0.5, 4),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            exhaustive_expectation(21, r(2, 1), 0.5),
            Err(Error::TooLargeForOracle { .. })
        ));
        assert!(matches!(
            expected_total(10, r(2, 1), 1.01),
            Err(Error::InvalidProbability(_))
        ));
    }

    #[test]
    fn expectation_identity_small_n() {
        for &(b, a) in &[(2, 1), (3, 1), (3, 2), (4, 3), (5, 2), (5, 3), (7, 4)] {
            let m = r(b, a);
            for (num, den) in [(1, 4), (1, 2), (3, 4)] {
                let pf = num as f64 / den as f64;
                let pr = q(num, den);
                for n in 1..=12u64 {
                    let flat = exhaustive_expectation(n, m, pf).unwrap();
                    let per_chain = exhaustive_expectation_per_chain(n, m, pf).unwrap();
                    let analytic = expected_total(n, m, pf).unwrap();
                    assert!((flat - analytic).abs() <= 1e-9);
                    assert!((per_chain - flat).abs() <= 1e-9);
                    if n <= 10 {
                        assert_eq!(
                            exhaustive_expectation_exact(n, m, &pr).unwrap(),
                            expected_total_exact(n, m, &pr).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn per_chain_matches_analytic_beyond_flat_range() {
        for m in [r(2, 1), r(3, 2)] {
            for n in [100u64, 5000] {
                let a = exhaustive_expectation_per_chain(n, m, 0.4).unwrap();
                let b = expected_total(n, m, 0.4).unwrap();
                assert!((a - b).abs() <= 1e-8 * b.max(1.0));
            }
        }
    }

    #[test]
    fn closed_form_within_one() {
        for b in [2u64, 3, 5] {
            let m = r(b, 1);
            for &p in &[0.1, 0.3, 0.5, 0.7, 0.95] {
                for n in [1u64, 17, 1000, 65_537, 1_000_000] {
                    for i in 0..=max_level(n, b).unwrap() {
                        let exact = expected_level(n, m, p, i).unwrap();
                        assert!((exact - unified_closed_form(n, b, p, i)).abs() <= 1.0);
                    }
                }
            }
        }
    }

    #[test]
    fn total_mean_near_main_term() {
        for &(b, a) in &[(2, 1), (3, 2), (5, 3)] {
            let m = r(b, a);
            for &p in &[0.2, 0.5, 0.8] {
                let main = |n: u64| b as f64 * p * n as f64 / (b as f64 + p);
                // fitted on small n, then checked at large n
                let c = (2..=1000u64)
                    .map(|n| {
                        (expected_total(n, m, p).unwrap() - main(n)).abs() / ((n as f64).ln() + 1.0)
                    })
                    .fold(0.0, f64::max);
                for n in [10_000u64, 1_000_000, 1 << 40] {
                    let dev = (expected_total(n, m, p).unwrap() - main(n)).abs();
                    assert!(dev <= c * ((n as f64).ln() + 1.0), "b={b} p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn regimes() {
        assert_eq!(level_regime(0, 1 << 20, 2), Regime::Low);
        assert_eq!(level_regime(18, 1 << 20, 2), Regime::Low);
        assert_eq!(level_regime(19, 1 << 20, 2), Regime::High);
    }
}
