//! The random setting: `[n]_p`, its exact solver, and the expectation and
//! concentration machinery around it.

pub mod bounds;
pub mod expectation;
pub mod monte_carlo;
pub mod sample;
pub mod solver;

pub use bounds::{
    chernoff_lower, chernoff_two_sided, chernoff_upper, concentration_envelope, TailBound,
};
pub use expectation::{
    exhaustive_expectation, exhaustive_expectation_exact, exhaustive_expectation_per_chain,
    expected_level, expected_total, expected_total_exact, level_probability,
    level_probability_exact, level_regime, unified_closed_form, Regime,
};
pub use monte_carlo::{monte_carlo, TrialSummary};
pub use sample::{sample_subset, ExplicitSubset, MaskSubset, SampleSpec, Subset, SubsetSample};
pub use solver::{level_counts, max_set_size_in_subset, star_counts, LevelStats};
