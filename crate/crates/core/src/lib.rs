//! Maximum r-multiple-free sets in `[n]` and in random subsets `[n]_p`.
//!
//! A set is r-multiple-free (r = b/a > 1 in lowest terms) when it contains no
//! pair x, y with r·x = y. The arcs x → r·x split `[n]` into directed paths
//! ("chains"), so the maximum multiple-free subset of any subset of `[n]` is
//! the sum of the independence numbers of the paths it induces. Chains are
//! generated arithmetically; the graph is never materialized.
//!
//! * [`chain`]: multipliers, successor and predecessor maps, subpower levels,
//!   and the partition of `[n]` into chains.
//! * [`extremal`]: the dense problem on `[n]`, plus brute-force oracles.
//! * [`random`]: reproducible sampling of `[n]_p`, the exact solver on a
//!   sample, per-level expectations, Chernoff bounds, and Monte Carlo runs.

pub mod chain;
pub mod error;
pub mod extremal;
pub mod random;

pub use chain::{
    chain_containing, chain_from, chain_starts, level_size, max_level, predecessor,
    reduce_multiplier, subpower_index, successor, Chain, Multiplier,
};
pub use error::{Error, Result};
pub use extremal::{
    brute_force_max, dense_residual, is_multiple_free, max_set, max_set_size, path_dp_max,
    ExtremalResult,
};

/// Exact rationals used for residuals and the exact-expectation mode.
pub type Rational = num::BigRational;
