//! Reproducible random subsets of `[n]`.
//!
//! Membership of v is decided by a keyed counter-based hash of
//! (seed, trial, v), so any element can be queried in any order from any
//! thread without storing a bitmap.

use serde::Serialize;

use crate::error::{Error, Result};

/// A subset of `[n]` that can answer membership queries.
pub trait Subset: Sync {
    fn n(&self) -> u64;
    fn contains(&self, v: u64) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleSpec {
    pub n: u64,
    pub p: f64,
    pub seed: u64,
    pub trial: u64,
}

impl SampleSpec {
    pub fn new(n: u64, p: f64, seed: u64, trial: u64) -> Result<Self> {
        check_probability(p)?;
        Ok(SampleSpec { n, p, seed, trial })
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output mixer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_key(seed: u64, trial: u64) -> u64 {
    mix64(mix64(seed ^ 0x6a09_e667_f3bc_c909).wrapping_add(trial.wrapping_mul(GOLDEN_GAMMA)))
}

/// The 64-bit pseudorandom word attached to element `v` of trial `trial`.
#[inline]
pub fn prf_word(seed: u64, trial: u64, v: u64) -> u64 {
    word_for_key(stream_key(seed, trial), v)
}

#[inline]
fn word_for_key(key: u64, v: u64) -> u64 {
    mix64(key.wrapping_add(v.wrapping_mul(GOLDEN_GAMMA)))
}

/// Uniform [0, 1) value of element `v`, with 53 bits of resolution.
pub fn uniform(seed: u64, trial: u64, v: u64) -> f64 {
    (prf_word(seed, trial, v) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A realization of `[n]_p`.
#[derive(Debug, Clone, Copy)]
pub struct SubsetSample {
    spec: SampleSpec,
    key: u64,
    // u < p  ⇔  (word >> 11) < ⌈p·2^53⌉ since p·2^53 is exact in f64
    threshold: u64,
}

impl SubsetSample {
    pub fn spec(&self) -> &SampleSpec {
        &self.spec
    }

    pub fn p(&self) -> f64 {
        self.spec.p
    }
}

impl Subset for SubsetSample {
    fn n(&self) -> u64 {
        self.spec.n
    }

    #[inline]
    fn contains(&self, v: u64) -> bool {
        (word_for_key(self.key, v) >> 11) < self.threshold
    }
}

pub fn sample_subset(spec: SampleSpec) -> Result<SubsetSample> {
    check_probability(spec.p)?;
    Ok(SubsetSample {
        spec,
        key: stream_key(spec.seed, spec.trial),
        threshold: (spec.p * (1u64 << 53) as f64).ceil() as u64,
    })
}

/// An explicitly listed subset of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSubset {
    n: u64,
    members: Vec<u64>,
}

impl ExplicitSubset {
    /// Elements outside `[1, n]` are dropped.
    pub fn new(n: u64, members: impl IntoIterator<Item = u64>) -> Self {
        let mut members: Vec<u64> = members.into_iter().filter(|&v| v >= 1 && v <= n).collect();
        members.sort_unstable();
        members.dedup();
        ExplicitSubset { n, members }
    }

    pub fn full(n: u64) -> Self {
        ExplicitSubset {
            n,
            members: (1..=n).collect(),
        }
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// Materializes the present elements of any subset.
    pub fn collect_from<S: Subset + ?Sized>(s: &S) -> Self {
        ExplicitSubset {
            n: s.n(),
            members: (1..=s.n()).filter(|&v| s.contains(v)).collect(),
        }
    }
}

impl Subset for ExplicitSubset {
    fn n(&self) -> u64 {
        self.n
    }

    fn contains(&self, v: u64) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Subset of `[n]`, n ≤ 64, where bit v−1 of `mask` marks v as present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskSubset {
    pub n: u64,
    pub mask: u64,
}

impl Subset for MaskSubset {
    fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    fn contains(&self, v: u64) -> bool {
        v >= 1 && v <= self.n && v <= 64 && (self.mask >> (v - 1)) & 1 == 1
    }
}
