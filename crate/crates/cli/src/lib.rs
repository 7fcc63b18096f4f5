//! Command-line front end for the `multfree` library.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! process exit code: 0 on success, 1 on a domain error (or an oracle
//! disagreement), 2 on a usage error.

pub mod format;
pub mod sweep;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use multfree::extremal::max_set_summary;
use multfree::random::{
    chernoff_lower, chernoff_upper, exhaustive_expectation, exhaustive_expectation_per_chain,
    expected_level, expected_total, level_probability, level_regime, max_set_size_in_subset,
    monte_carlo, sample_subset, unified_closed_form, ExplicitSubset, SampleSpec, TailBound,
    TrialSummary,
};
use multfree::{
    brute_force_max, max_level, max_set, max_set_size, path_dp_max, reduce_multiplier, Multiplier,
};
use num::ToPrimitive;
use serde_json::{json, Value};

use crate::format::{fmt_real, json_opt_real, json_real, write_csv, write_pairs, write_table};
use crate::sweep::{PGrid, SweepRow, SWEEP_COLUMNS};

#[derive(Debug, Parser)]
#[command(
    name = "multfree",
    version,
    about = "Maximum r-multiple-free sets in [n] and [n]_p"
)]
struct Cli {
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, env = "MULTFREE_THREADS", value_parser = clap::value_parser!(u64).range(1..=1024))]
    threads: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    Upper,
    Lower,
    TwoSided,
}

/// `b/a` (numerator first) or a bare integer; syntax only, reduction happens later.
#[derive(Debug, Clone, Copy)]
struct RatioArg {
    numerator: u64,
    denominator: u64,
}

impl RatioArg {
    fn multiplier(self) -> multfree::Result<Multiplier> {
        reduce_multiplier(self.numerator, self.denominator)
    }
}

fn parse_ratio(s: &str) -> Result<RatioArg, String> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let parse = |v: &str| {
        v.trim()
            .parse::<u64>()
            .map_err(|_| format!("expected <b>/<a>, got {s:?}"))
    };
    Ok(RatioArg {
        numerator: parse(num)?,
        denominator: parse(den)?,
    })
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    n: u64,
    /// Ratio r = b/a, written numerator first.
    #[arg(long, value_parser = parse_ratio)]
    ratio: RatioArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact maximum multiple-free subset of [n].
    Exact {
        #[command(flatten)]
        common: Common,
        /// Print the canonical maximum set.
        #[arg(long)]
        emit_set: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Expected maximum size over [n]_p.
    Expect {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        per_level: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Monte Carlo trials at one p.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        per_level: bool,
        /// Constant of the concentration envelope.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Monte Carlo trials over an inclusive p-grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long = "p-grid")]
        p_grid: PGrid,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Cross-check the solvers against both brute-force oracles.
    Oracle {
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=18))]
        n: u64,
        #[arg(long, value_parser = parse_ratio)]
        ratio: RatioArg,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Chernoff tail bounds.
    Bound {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        mean: f64,
        #[arg(long, value_enum)]
        kind: BoundKind,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(multfree::Error),
    Disagreement,
    Io(io::Error),
}

impl From<multfree::Error> for Failure {
    fn from(e: multfree::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = Result<(), Failure>;

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };

    // Output is buffered so the command can run inside a rayon pool.
    let mut buffer = Vec::new();
    let result = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build()
        {
            Ok(pool) => pool.install(|| execute(cli.command, &mut buffer)),
            Err(e) => Err(Failure::Io(io::Error::other(e))),
        },
        None => execute(cli.command, &mut buffer),
    };
    let written = out.write_all(&buffer).map_err(Failure::Io);
    let result = result.and(written);

    match result {
        Ok(()) => 0,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Disagreement) => {
            let _ = writeln!(err, "error: oracle disagreement");
            1
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Exact {
            common,
            emit_set,
            format,
        } => cmd_exact(common.n, common.ratio.multiplier()?, emit_set, format, out),
        Command::Expect {
            common,
            p,
            per_level,
            format,
        } => cmd_expect(
            common.n,
            common.ratio.multiplier()?,
            p,
            per_level,
            format,
            out,
        ),
        Command::Sample {
            common,
            p,
            seed,
            trials,
            per_level,
            c,
            format,
        } => {
            let m = common.ratio.multiplier()?;
            let summary = monte_carlo(common.n, m, p, trials, seed)?;
            cmd_sample(&summary, m, per_level, c, format, out)
        }
        Command::Sweep {
            common,
            p_grid,
            trials,
            seed,
            format,
        } => cmd_sweep(
            common.n,
            common.ratio.multiplier()?,
            &p_grid,
            trials,
            seed,
            format,
            out,
        ),
        Command::Oracle { n, ratio, p } => cmd_oracle(n, ratio.multiplier()?, p, out),
        Command::Bound { lambda, mean, kind } => cmd_bound(lambda, mean, kind, out),
    }
}

fn json_line(out: &mut dyn Write, value: &Value) -> io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    )
}

fn cmd_exact(
    n: u64,
    m: Multiplier,
    emit_set: bool,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let res = if emit_set {
        max_set(n, m)
    } else {
        max_set_summary(n, m)
    };
    let residual = res.residual.to_string();
    let residual_value = res.residual.to_f64().unwrap_or(f64::NAN);
    let set_text = res
        .witness
        .as_ref()
        .map(|w| w.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
    match format {
        Format::Table => {
            let mut pairs = vec![
                ("n", n.to_string()),
                ("ratio", m.to_string()),
                ("size", res.size.to_string()),
                (
                    "main_term",
                    fmt_real(m.b() as f64 * n as f64 / (m.b() + 1) as f64),
                ),
                (
                    "residual",
                    format!("{residual} ({})", fmt_real(residual_value)),
                ),
            ];
            if let Some(set) = set_text {
                pairs.push(("set", set));
            }
            write_pairs(out, &pairs)?;
        }
        Format::Csv => {
            let mut header = vec!["n", "a", "b", "size", "residual", "residual_value"];
            let mut row = vec![
                n.to_string(),
                m.a().to_string(),
                m.b().to_string(),
                res.size.to_string(),
                residual,
                fmt_real(residual_value),
            ];
            if let Some(set) = set_text {
                header.push("set");
                row.push(set);
            }
            write_csv(out, &header, &[row])?;
        }
        Format::Json => {
            let mut v = json!({
                "n": n,
                "a": m.a(),
                "b": m.b(),
                "size": res.size,
                "residual": residual,
                "residual_value": json_real(residual_value),
            });
            if let Some(w) = res.witness {
                v["set"] = json!(w);
            }
            json_line(out, &v)?;
        }
    }
    Ok(())
}

fn cmd_expect(
    n: u64,
    m: Multiplier,
    p: f64,
    per_level: bool,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let total = expected_total(n, m, p)?;
    let main_term = m.b() as f64 * p * n as f64 / (m.b() as f64 + p);
    let levels = max_level(n, m.b()).map_or(0, |l| l + 1);
    let header = [
        "level",
        "level_total",
        "probability",
        "expected",
        "closed_form",
        "regime",
    ];
    let mut rows = Vec::new();
    let mut json_levels = Vec::new();
    if per_level {
        for i in 0..levels {
            let expected = expected_level(n, m, p, i)?;
            let total_i = multfree::level_size(n, m.b(), i)?;
            let prob = level_probability(i, p);
            let closed = unified_closed_form(n, m.b(), p, i);
            let regime = level_regime(i, n, m.b());
            rows.push(vec![
                i.to_string(),
                total_i.to_string(),
                fmt_real(prob),
                fmt_real(expected),
                fmt_real(closed),
                serde_json::to_value(regime)
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_string(),
            ]);
            json_levels.push(json!({
                "level": i,
                "level_total": total_i,
                "probability": json_real(prob),
                "expected": json_real(expected),
                "closed_form": json_real(closed),
                "regime": regime,
            }));
        }
    }
    match format {
        Format::Table => {
            write_pairs(
                out,
                &[
                    ("expected_total", fmt_real(total)),
                    ("main_term", fmt_real(main_term)),
                ],
            )?;
            if per_level {
                writeln!(out)?;
                write_table(out, &header, &rows)?;
            }
        }
        Format::Csv => {
            if per_level {
                write_csv(out, &header, &rows)?;
            } else {
                write_csv(
                    out,
                    &["n", "a", "b", "p", "expected_total", "main_term"],
                    &[vec![
                        n.to_string(),
                        m.a().to_string(),
                        m.b().to_string(),
                        fmt_real(p),
                        fmt_real(total),
                        fmt_real(main_term),
                    ]],
                )?;
            }
        }
        Format::Json => {
            let mut v = json!({
                "n": n,
                "a": m.a(),
                "b": m.b(),
                "p": json_real(p),
                "expected_total": json_real(total),
                "main_term": json_real(main_term),
            });
            if per_level {
                v["levels"] = Value::Array(json_levels);
            }
            json_line(out, &v)?;
        }
    }
    Ok(())
}

fn cmd_sample(
    s: &TrialSummary,
    m: Multiplier,
    per_level: bool,
    c: f64,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    if c.is_nan() || c < 0.0 {
        return Err(multfree::Error::DomainError(format!(
            "envelope constant c = {c} must be >= 0"
        ))
        .into());
    }
    let main_term = m.b() as f64 * s.p * s.n as f64 / (m.b() as f64 + s.p);
    let envelope = s.envelope_at(c);
    let sqrt_pn = (s.p * s.n as f64).sqrt();
    let level_header = ["level", "mean_star_count", "expected", "regime"];
    let level_rows: Vec<Vec<String>> = s
        .per_level_means
        .iter()
        .zip(&s.per_level_expected)
        .enumerate()
        .map(|(i, (mean, expected))| {
            let regime = level_regime(i as u32, s.n, m.b());
            vec![
                i.to_string(),
                fmt_real(*mean),
                fmt_real(*expected),
                serde_json::to_value(regime)
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_string(),
            ]
        })
        .collect();
    let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), fmt_real);
    match format {
        Format::Table => {
            write_pairs(
                out,
                &[
                    ("n", s.n.to_string()),
                    ("ratio", m.to_string()),
                    ("p", fmt_real(s.p)),
                    ("seed", s.seed.to_string()),
                    ("trials", s.trials.to_string()),
                    ("mean", fmt_real(s.mean)),
                    ("sample_stddev", fmt_real(s.sample_stddev)),
                    ("analytic_total", fmt_real(s.analytic_total)),
                    ("main_term", fmt_real(main_term)),
                    ("envelope_c", fmt_real(c)),
                    ("envelope", opt(envelope)),
                    ("max_deviation", fmt_real(s.max_deviation)),
                    (
                        "max_deviation_over_sqrt_pn",
                        opt((sqrt_pn > 0.0).then(|| s.deviation_over_sqrt_pn())),
                    ),
                    ("fitted_constant", opt(s.fitted_constant)),
                ],
            )?;
            if per_level {
                writeln!(out)?;
                write_table(out, &level_header, &level_rows)?;
            }
        }
        Format::Csv => {
            if per_level {
                write_csv(out, &level_header, &level_rows)?;
            } else {
                let rows: Vec<Vec<String>> = SweepRow::from_summary(s)
                    .iter()
                    .map(SweepRow::cells)
                    .collect();
                write_csv(out, &SWEEP_COLUMNS, &rows)?;
            }
        }
        Format::Json => {
            let mut v = json!({
                "n": s.n,
                "a": s.a,
                "b": s.b,
                "p": json_real(s.p),
                "seed": s.seed,
                "trials": s.trials,
                "sizes": s.sizes,
                "mean": json_real(s.mean),
                "sample_stddev": json_real(s.sample_stddev),
                "analytic_total": json_real(s.analytic_total),
                "main_term": json_real(main_term),
                "envelope_c": json_real(c),
                "envelope": json_opt_real(envelope),
                "max_deviation": json_real(s.max_deviation),
                "fitted_constant": json_opt_real(s.fitted_constant),
            });
            if per_level {
                v["per_level_means"] = s.per_level_means.iter().map(|&x| json_real(x)).collect();
                v["per_level_expected"] =
                    s.per_level_expected.iter().map(|&x| json_real(x)).collect();
            }
            json_line(out, &v)?;
        }
    }
    Ok(())
}

fn cmd_sweep(
    n: u64,
    m: Multiplier,
    grid: &PGrid,
    trials: u64,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let mut rows = Vec::new();
    for p in grid.points() {
        let summary = monte_carlo(n, m, p, trials, seed)?;
        rows.extend(SweepRow::from_summary(&summary));
    }
    match format {
        Format::Table => {
            let cells: Vec<Vec<String>> = rows.iter().map(SweepRow::cells).collect();
            write_table(out, &SWEEP_COLUMNS, &cells)?;
        }
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows.iter().map(SweepRow::cells).collect();
            write_csv(out, &SWEEP_COLUMNS, &cells)?;
        }
        Format::Json => {
            let v = Value::Array(rows.iter().map(SweepRow::to_json).collect());
            json_line(out, &v)?;
        }
    }
    Ok(())
}

const ORACLE_SEEDS: u64 = 50;
const EXPECTATION_TOLERANCE: f64 = 1e-9;

fn cmd_oracle(n: u64, m: Multiplier, p: Option<f64>, out: &mut dyn Write) -> CmdResult {
    let mut agree = true;
    let full: Vec<u64> = (1..=n).collect();
    let chain = max_set_size(n, m);
    let brute = brute_force_max(&full, m)?;
    let dp = path_dp_max(&full, m);
    let ok = chain == brute && brute == dp;
    agree &= ok;
    writeln!(
        out,
        "dense   n={n} ratio={m} chain={chain} brute_force={brute} path_dp={dp} {}",
        verdict(ok)
    )?;

    if let Some(p) = p {
        let mut mismatches = 0;
        for seed in 0..ORACLE_SEEDS {
            let sample = sample_subset(SampleSpec::new(n, p, seed, 0)?)?;
            let present = ExplicitSubset::collect_from(&sample);
            let chain = max_set_size_in_subset(&sample, m);
            let brute = brute_force_max(present.members(), m)?;
            let dp = path_dp_max(present.members(), m);
            if !(chain == brute && brute == dp) {
                mismatches += 1;
                writeln!(
                    out,
                    "sample  seed={seed} chain={chain} brute_force={brute} path_dp={dp} DISAGREE"
                )?;
            }
        }
        agree &= mismatches == 0;
        writeln!(
            out,
            "random  p={} seeds={ORACLE_SEEDS} mismatches={mismatches} {}",
            fmt_real(p),
            verdict(mismatches == 0)
        )?;

        let flat = exhaustive_expectation(n, m, p)?;
        let per_chain = exhaustive_expectation_per_chain(n, m, p)?;
        let analytic = expected_total(n, m, p)?;
        let ok = (flat - analytic).abs() <= EXPECTATION_TOLERANCE
            && (flat - per_chain).abs() <= EXPECTATION_TOLERANCE;
        agree &= ok;
        writeln!(
            out,
            "expect  exhaustive={} per_chain={} analytic={} {}",
            fmt_real(flat),
            fmt_real(per_chain),
            fmt_real(analytic),
            verdict(ok)
        )?;
    }

    if agree {
        Ok(())
    } else {
        Err(Failure::Disagreement)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "OK"
    } else {
        "DISAGREE"
    }
}

fn cmd_bound(lambda: f64, mean: f64, kind: BoundKind, out: &mut dyn Write) -> CmdResult {
    let tb = TailBound::new(lambda, mean)?;
    let value = match kind {
        BoundKind::Upper => chernoff_upper(lambda, mean),
        BoundKind::Lower => chernoff_lower(lambda, mean),
        BoundKind::TwoSided => tb
            .two_sided_probability()
            .ok_or(multfree::Error::LambdaOutOfRange(lambda))?,
    };
    writeln!(out, "{}", fmt_real(value))?;
    Ok(())
}
