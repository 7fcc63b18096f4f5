//! Chain algebra for the graph on `[n]` with arcs x → (b/a)·x.
//!
//! Every vertex has in- and out-degree at most one and the graph is acyclic,
//! so its components are directed paths. A chain starts at an element not
//! divisible by `b` and its j-th element has b-adic valuation exactly j.

use std::fmt;
use std::str::FromStr;

use num::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// A reduced ratio r = b/a with gcd(a, b) = 1 and a < b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Multiplier {
    a: u64,
    b: u64,
}

impl Multiplier {
    /// Denominator.
    pub fn a(&self) -> u64 {
        self.a
    }

    /// Numerator.
    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn ratio(&self) -> f64 {
        self.b as f64 / self.a as f64
    }

    pub fn is_integer(&self) -> bool {
        self.a == 1
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.b, self.a)
    }
}

/// Parses `b/a` (numerator first) or a bare integer `b`.
impl FromStr for Multiplier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRatio(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((num, den)) => (num.trim(), den.trim()),
            None => (s.trim(), "1"),
        };
        let numerator = num.parse::<u64>().map_err(|_| bad())?;
        let denominator = den.parse::<u64>().map_err(|_| bad())?;
        reduce_multiplier(numerator, denominator)
    }
}

/// Reduces `numerator/denominator` to lowest terms and checks it exceeds 1.
pub fn reduce_multiplier(numerator: u64, denominator: u64) -> Result<Multiplier> {
    if denominator == 0 {
        return Err(Error::ZeroDenominator { numerator });
    }
    let g = numerator.gcd(&denominator);
    if g == 0 || numerator <= denominator {
        return Err(Error::RatioNotGreaterThanOne {
            numerator,
            denominator,
        });
    }
    Ok(Multiplier {
        a: denominator / g,
        b: numerator / g,
    })
}

/// Returns b·x/a when `a | x` and the result is at most `n`.
#[inline]
pub fn successor(x: u64, m: Multiplier, n: u64) -> Option<u64> {
    if !x.is_multiple_of(m.a) {
        return None;
    }
    // x/a is exact here, so dividing first keeps b·x/a from overflowing.
    (x / m.a).checked_mul(m.b).filter(|&y| y <= n)
}

/// Returns a·x/b when `b | x`. The result is always below `x`.
#[inline]
pub fn predecessor(x: u64, m: Multiplier) -> Option<u64> {
    x.is_multiple_of(m.b).then(|| x / m.b * m.a)
}

/// The b-adic valuation of `k`: the unique i with k = b^i·l and b ∤ l.
pub fn subpower_index(k: u64, b: u64) -> u32 {
    assert!(k >= 1 && b >= 2, "subpower_index needs k >= 1 and b >= 2");
    let mut k = k;
    let mut i = 0;
    while k.is_multiple_of(b) {
        k /= b;
        i += 1;
    }
    i
}

/// Largest level i with b^i ≤ n, computed with integer powers only.
/// Returns `None` for n = 0, where no level exists.
pub fn max_level(n: u64, b: u64) -> Option<u32> {
    assert!(b >= 2, "max_level needs b >= 2");
    if n == 0 {
        return None;
    }
    let mut i = 0u32;
    let mut power = 1u64;
    while let Some(next) = power.checked_mul(b).filter(|&v| v <= n) {
        power = next;
        i += 1;
    }
    Some(i)
}

/// Exact |T_i| = ⌊n/b^i⌋ − ⌊n/b^(i+1)⌋, the number of i-th subpowers of `b` in `[n]`.
pub fn level_size(n: u64, b: u64, i: u32) -> Result<u64> {
    let out_of_range = Error::LevelOutOfRange { level: i, b, n };
    let power = b.checked_pow(i).ok_or(out_of_range.clone())?;
    if power > n {
        return Err(out_of_range);
    }
    let next = power.checked_mul(b).map_or(0, |q| n / q);
    Ok(n / power - next)
}

/// Chain starts in increasing order: the s ∈ `[n]` with b ∤ s.
pub fn chain_starts(n: u64, m: Multiplier) -> impl Iterator<Item = u64> + Clone {
    let b = m.b;
    (1..=n).filter(move |s| s % b != 0)
}

/// Iterator over a chain from a given element onwards, following successors.
#[derive(Debug, Clone)]
pub struct ChainWalk {
    next: Option<u64>,
    m: Multiplier,
    n: u64,
}

impl ChainWalk {
    pub fn new(from: u64, m: Multiplier, n: u64) -> Self {
        ChainWalk {
            next: (from >= 1 && from <= n).then_some(from),
            m,
            n,
        }
    }
}

impl Iterator for ChainWalk {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        self.next = successor(current, self.m, self.n);
        Some(current)
    }
}

/// Number of elements of the chain starting at `start`, without allocating.
#[inline]
pub fn chain_len(start: u64, m: Multiplier, n: u64) -> u32 {
    ChainWalk::new(start, m, n).count() as u32
}

/// One maximal directed path of the graph on `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    elements: Vec<u64>,
}

impl Chain {
    pub fn start(&self) -> u64 {
        self.elements[0]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// Elements at even positions u_0, u_2, …, a maximum independent set of the path.
    pub fn even_positions(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().step_by(2).copied()
    }

    /// Independence number of the path, ⌈len/2⌉.
    pub fn independence_number(&self) -> usize {
        self.elements.len().div_ceil(2)
    }
}

/// The maximal chain beginning at `start`.
pub fn chain_from(start: u64, m: Multiplier, n: u64) -> Result<Chain> {
    if start == 0 || start > n {
        return Err(Error::ElementOutOfRange { value: start, n });
    }
    if start.is_multiple_of(m.b) {
        return Err(Error::NotAChainStart { start, b: m.b });
    }
    Ok(Chain {
        elements: ChainWalk::new(start, m, n).collect(),
    })
}

/// The chain containing `v` and the position of `v` in it.
pub fn chain_containing(v: u64, m: Multiplier, n: u64) -> Result<(Chain, usize)> {
    if v == 0 || v > n {
        return Err(Error::ElementOutOfRange { value: v, n });
    }
    let mut start = v;
    let mut position = 0;
    while let Some(prev) = predecessor(start, m) {
        start = prev;
        position += 1;
    }
    Ok((chain_from(start, m, n)?, position))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(b: u64, a: u64) -> Multiplier {
        reduce_multiplier(b, a).unwrap()
    }

    const FAMILY: [(u64, u64); 7] = [(2, 1), (3, 1), (3, 2), (4, 3), (5, 2), (5, 3), (7, 4)];

    #[test]
    fn reduce_examples() {
        assert_eq!(r(2, 1), Multiplier { a: 1, b: 2 });
        assert_eq!(r(6, 4), Multiplier { a: 2, b: 3 });
        assert!(matches!(
            reduce_multiplier(4, 6),
            Err(Error::RatioNotGreaterThanOne { .. })
        ));
        assert!(matches!(
            reduce_multiplier(5, 5),
            Err(Error::RatioNotGreaterThanOne { .. })
        ));
        assert!(matches!(
            reduce_multiplier(0, 3),
            Err(Error::RatioNotGreaterThanOne { .. })
        ));
        assert!(matches!(
            reduce_multiplier(3, 0),
            Err(Error::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn parse_ratio() {
        assert_eq!("3/2".parse::<Multiplier>().unwrap(), r(3, 2));
        assert_eq!("2".parse::<Multiplier>().unwrap(), r(2, 1));
        assert_eq!("10/4".parse::<Multiplier>().unwrap(), r(5, 2));
        assert!(matches!(
            "x/2".parse::<Multiplier>(),
            Err(Error::InvalidRatio(_))
        ));
        assert!(matches!(
            "2/3".parse::<Multiplier>(),
            Err(Error::RatioNotGreaterThanOne { .. })
        ));
        assert_eq!(r(3, 2).to_string(), "3/2");
    }

    #[test]
    fn successor_examples() {
        let m = r(3, 2);
        assert_eq!(successor(4, m, 10), Some(6));
        assert_eq!(successor(5, m, 10), None);
        assert_eq!(successor(8, m, 10), None);
    }

    #[test]
    fn successor_near_word_limit() {
        let m = r(3, 2);
        let n = 1u64 << 50;
        let x = (1u64 << 50) / 3 * 2;
        assert_eq!(successor(x, m, n), Some(x / 2 * 3));
        assert_eq!(successor(u64::MAX - 1, r(3, 2), u64::MAX), None);
    }

    #[test]
    fn predecessor_examples() {
        assert_eq!(predecessor(6, r(3, 2)), Some(4));
        assert_eq!(predecessor(4, r(3, 2)), None);
        assert_eq!(predecessor(8, r(2, 1)), Some(4));
    }

    #[test]
    fn subpower_examples() {
        assert_eq!(subpower_index(12, 2), 2);
        assert_eq!(subpower_index(5, 3), 0);
        assert_eq!(subpower_index(27, 3), 3);
    }

    #[test]
    fn level_size_examples() {
        // Enumerated by hand: odd numbers, {2,6,10}, {8}.
        assert_eq!(level_size(10, 2, 0).unwrap(), 5);
        assert_eq!(level_size(10, 2, 1).unwrap(), 3);
        assert_eq!(level_size(10, 2, 3).unwrap(), 1);
        assert!(matches!(
            level_size(10, 2, 4),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(level_size(0, 2, 0).is_err());
        assert!(level_size(u64::MAX, 2, 70).is_err());
        assert_eq!(level_size(u64::MAX, 2, 63).unwrap(), 1);
    }

    #[test]
    fn level_size_matches_enumeration() {
        for b in 2..=7u64 {
            for n in 1..=300u64 {
                for i in 0..=max_level(n, b).unwrap() {
                    let brute = (1..=n).filter(|&k| subpower_index(k, b) == i).count() as u64;
                    let exact = level_size(n, b, i).unwrap();
                    assert_eq!(exact, brute);
                    let approx = (b - 1) as f64 * n as f64 / (b as f64).powi(i as i32 + 1);
                    assert!((exact as f64 - approx).abs() <= 1.0);
                }
            }
        }
    }

    #[test]
    fn max_level_is_integer_exact() {
        assert_eq!(max_level(0, 2), None);
        assert_eq!(max_level(1, 2), Some(0));
        assert_eq!(max_level(8, 2), Some(3));
        assert_eq!(max_level(7, 2), Some(2));
        // float log would give 4.999… or 5.000… here
        assert_eq!(max_level(243, 3), Some(5));
        assert_eq!(max_level(242, 3), Some(4));
        assert_eq!(max_level(1_000_000_000_000_000, 10), Some(15));
        assert_eq!(max_level(u64::MAX, 2), Some(63));
    }

    #[test]
    fn chain_starts_examples() {
        assert_eq!(chain_starts(6, r(2, 1)).collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(
            chain_starts(6, r(3, 1)).collect::<Vec<_>>(),
            vec![1, 2, 4, 5]
        );
        assert_eq!(chain_starts(1, r(7, 4)).collect::<Vec<_>>(), vec![1]);
        assert_eq!(chain_starts(0, r(2, 1)).count(), 0);
    }

    #[test]
    fn chain_from_examples() {
        assert_eq!(chain_from(4, r(3, 2), 10).unwrap().elements(), &[4, 6, 9]);
        assert_eq!(
            chain_from(1, r(2, 1), 10).unwrap().elements(),
            &[1, 2, 4, 8]
        );
        assert_eq!(chain_from(7, r(3, 2), 10).unwrap().elements(), &[7]);
        assert!(matches!(
            chain_from(6, r(3, 2), 10),
            Err(Error::NotAChainStart { .. })
        ));
        assert!(matches!(
            chain_from(11, r(3, 2), 10),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn chain_containing_examples() {
        let (c, pos) = chain_containing(6, r(3, 2), 10).unwrap();
        assert_eq!((c.elements(), pos), (&[4u64, 6, 9][..], 1));
        let (c, pos) = chain_containing(9, r(3, 2), 10).unwrap();
        assert_eq!((c.elements(), pos), (&[4u64, 6, 9][..], 2));
        let (c, pos) = chain_containing(1, r(5, 3), 1).unwrap();
        assert_eq!((c.start(), pos), (1, 0));
    }

    #[test]
    fn chains_partition_range() {
        for &(b, a) in &FAMILY {
            let m = r(b, a);
            for &n in &[0u64, 1, 2, 17, 1000, 100_000] {
                let mut seen = vec![false; n as usize + 1];
                let mut total = 0u64;
                let levels = max_level(n, b).map_or(0, |l| l as usize + 1);
                let mut per_level = vec![0u64; levels];
                let bound = if n == 0 {
                    0
                } else {
                    // ⌊log_{b/a} n⌋ + 1 via repeated exact comparison a^k·n ≥ b^k
                    let mut k = 0u32;
                    while (m.b as u128).pow(k + 1) <= (n as u128) * (m.a as u128).pow(k + 1) {
                        k += 1;
                    }
                    k as usize + 1
                };
                for s in chain_starts(n, m) {
                    let c = chain_from(s, m, n).unwrap();
                    assert!(c.len() <= bound);
                    assert_eq!(successor(*c.elements().last().unwrap(), m, n), None);
                    for (j, &u) in c.elements().iter().enumerate() {
                        assert!(!seen[u as usize], "{u} appears twice");
                        seen[u as usize] = true;
                        assert_eq!(subpower_index(u, b) as usize, j);
                        per_level[j] += 1;
                    }
                    total += c.len() as u64;
                }
                assert_eq!(total, n);
                assert!(seen.iter().skip(1).all(|&s| s));
                for (i, &count) in per_level.iter().enumerate() {
                    assert_eq!(count, level_size(n, b, i as u32).unwrap());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn predecessor_inverts_successor(x in 1u64..(1 << 50), idx in 0usize..7) {
            let (b, a) = FAMILY[idx];
            let m = r(b, a);
            if let Some(y) = successor(x, m, 1 << 50) {
                prop_assert_eq!(predecessor(y, m), Some(x));
            }
        }

        #[test]
        fn position_is_valuation(v in 1u64..1_000_000, idx in 0usize..7) {
            let (b, a) = FAMILY[idx];
            let m = r(b, a);
            let (c, pos) = chain_containing(v, m, 1_000_000).unwrap();
            prop_assert_eq!(pos as u32, subpower_index(v, b));
            prop_assert_eq!(c.elements()[pos], v);
        }
    }
}
