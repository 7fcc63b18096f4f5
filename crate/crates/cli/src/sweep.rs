//! p-grids and the per-trial rows emitted by `sweep` and `sample`.

use std::str::FromStr;

use multfree::random::TrialSummary;
use serde_json::{json, Value};

use crate::format::{fmt_real, json_real};

const GRID_TOLERANCE: f64 = 1e-9;

/// Column order of sweep CSV output.
pub const SWEEP_COLUMNS: [&str; 10] = [
    "n", "a", "b", "p", "seed", "trial", "size", "analytic", "ratio", "target",
];

/// An inclusive grid `start:stop:step` of probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct PGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl PGrid {
    /// Grid points, each rounded to the printed 12 significant digits so the
    /// value used for sampling is the value that appears in the output.
    pub fn points(&self) -> Vec<f64> {
        if self.start == self.stop {
            return vec![self.start];
        }
        let count = ((self.stop - self.start) / self.step).round() as u64;
        (0..=count)
            .map(|k| {
                let p = self.start + k as f64 * self.step;
                fmt_real(p).parse::<f64>().expect("formatted real parses")
            })
            .collect()
    }
}

impl FromStr for PGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected <start>:<stop>:<step>, got {s:?}"));
        };
        let parse = |what: &str, v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("{what} {v:?} is not a real number"))
        };
        let (start, stop, step) = (
            parse("start", start)?,
            parse("stop", stop)?,
            parse("step", step)?,
        );
        for (name, v) in [("start", start), ("stop", stop)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} = {v} is not in [0, 1]"));
            }
        }
        if stop < start {
            return Err(format!("stop {stop} is below start {start}"));
        }
        if stop > start {
            if step.is_nan() || step <= 0.0 {
                return Err(format!("step {step} must be positive"));
            }
            let span = stop - start;
            let count = (span / step).round();
            if count < 1.0 || (count * step - span).abs() > GRID_TOLERANCE {
                return Err(format!("step {step} does not divide the span {span}"));
            }
        }
        Ok(PGrid { start, stop, step })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub p: f64,
    pub seed: u64,
    pub trial: u64,
    pub size: u64,
    pub analytic: f64,
    /// size/(n·p); 0 when p = 0.
    pub ratio: f64,
    /// b/(b+p)
    pub target: f64,
}

impl SweepRow {
    pub fn from_summary(summary: &TrialSummary) -> Vec<SweepRow> {
        let np = summary.n as f64 * summary.p;
        summary
            .sizes
            .iter()
            .enumerate()
            .map(|(trial, &size)| SweepRow {
                n: summary.n,
                a: summary.a,
                b: summary.b,
                p: summary.p,
                seed: summary.seed,
                trial: trial as u64,
                size,
                analytic: summary.analytic_total,
                ratio: if np > 0.0 { size as f64 / np } else { 0.0 },
                target: summary.b as f64 / (summary.b as f64 + summary.p),
            })
            .collect()
    }

    pub fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.a.to_string(),
            self.b.to_string(),
            fmt_real(self.p),
            self.seed.to_string(),
            self.trial.to_string(),
            self.size.to_string(),
            fmt_real(self.analytic),
            fmt_real(self.ratio),
            fmt_real(self.target),
        ]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "p": json_real(self.p),
            "seed": self.seed,
            "trial": self.trial,
            "size": self.size,
            "analytic": json_real(self.analytic),
            "ratio": json_real(self.ratio),
            "target": json_real(self.target),
        })
    }
}
