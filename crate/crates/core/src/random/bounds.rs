//! Chernoff tail bounds for sums of independent indicators, and the
//! deviation scale √(pn)·ln n·ln ln n of the concentration result.

use serde::Serialize;

use crate::error::{Error, Result};

/// Pr[X ≥ (1+λ)E X] ≤ exp(−λ²·E X/(2+λ)).
pub fn chernoff_upper(lambda: f64, mean: f64) -> f64 {
    (-lambda * lambda * mean / (2.0 + lambda)).exp()
}

/// Pr[X ≤ (1−λ)E X] ≤ exp(−λ²·E X/2).
pub fn chernoff_lower(lambda: f64, mean: f64) -> f64 {
    (-lambda * lambda * mean / 2.0).exp()
}

/// Pr[|X − E X| ≥ λ·E X] ≤ 2·exp(−λ²·E X/3), valid for 0 ≤ λ ≤ 1.
///
/// The returned value is not capped; see [`TailBound::two_sided_probability`].
pub fn chernoff_two_sided(lambda: f64, mean: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    Ok(2.0 * (-lambda * lambda * mean / 3.0).exp())
}

/// All three bounds for one (λ, E X) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBound {
    pub lambda: f64,
    pub mean: f64,
    pub upper: f64,
    pub lower: f64,
    /// Absent when λ > 1.
    pub two_sided: Option<f64>,
}

impl TailBound {
    pub fn new(lambda: f64, mean: f64) -> Result<Self> {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(Error::DomainError(format!(
                "lambda = {lambda} must be >= 0"
            )));
        }
        if mean.is_nan() || mean < 0.0 {
            return Err(Error::DomainError(format!("mean = {mean} must be >= 0")));
        }
        Ok(TailBound {
            lambda,
            mean,
            upper: chernoff_upper(lambda, mean),
            lower: chernoff_lower(lambda, mean),
            two_sided: chernoff_two_sided(lambda, mean).ok(),
        })
    }

    pub fn two_sided_probability(&self) -> Option<f64> {
        self.two_sided.map(|v| v.min(1.0))
    }
}

/// c·√(pn)·ln n·ln ln n.
pub fn concentration_envelope(n: u64, p: f64, c: f64) -> Result<f64> {
    if n < 16 {
        return Err(Error::DomainError(format!(
            "concentration envelope needs n >= 16, got {n}"
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::DomainError(format!(
            "concentration envelope needs 0 < p <= 1, got {p}"
        )));
    }
    if c.is_nan() || c < 0.0 {
        return Err(Error::DomainError(format!(
            "envelope constant c = {c} must be >= 0"
        )));
    }
    let n = n as f64;
    Ok(c * (p * n).sqrt() * n.ln() * n.ln().ln())
}
