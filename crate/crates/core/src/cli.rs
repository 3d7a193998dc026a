//! Command-line front end. Every subcommand renders one deterministic CSV or
//! JSON document so runs with the same configuration and seeds are
//! byte-identical regression fixtures.

use crate::error::{Error, Result};
use crate::optimizer::{maximize_ac, SearchMode};
use crate::randomness::{self, CrossoverReport, RatePoint, DEFAULT_T3_BUDGET};
use crate::scenario::{joint_table, sequential_chain, Strategy};
use crate::witness::{
    self, canonicalize, certify, classical_frontier, tradeoff_bound, Certificate, SQRT3,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "seqrac",
    version,
    about = "Simulator and analysis toolkit for sequential 3->1 quantum random access codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Best second-decoder score for each first-decoder score, with the
    /// classical staircase for comparison
    Tradeoff(TradeoffArgs),
    /// Both decoder scores of the ideal family across a sharpness grid
    Sweep(SweepArgs),
    /// Two-sided sharpness certificate from an observed score pair
    Certify(CertifyArgs),
    /// Scores of successive sharp decoders relaying a single preparation
    Chain(ChainArgs),
    /// Certified randomness rates per witness, with the crossover summary
    Randomness(RandomnessArgs),
    /// Canonical-form check of a strategy file
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TradeoffArgs {
    /// First-decoder score grid as start:stop:points; defaults to 101 points
    /// from 0.5 to the quantum maximum
    #[arg(long)]
    pub grid: Option<String>,
    /// Verify each row with the constrained search using this many
    /// objective evaluations
    #[arg(long)]
    pub budget: Option<usize>,
    /// Comma-separated worker seeds for the search
    #[arg(long, default_value = "0")]
    pub seed: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Sharpness grid as start:stop:points; defaults to 101 points on [0,1]
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Observed first-decoder score
    pub a_ab: f64,
    /// Observed second-decoder score
    pub a_ac: f64,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    /// Number of sequential decoders
    #[arg(default_value_t = 10)]
    pub k: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct RandomnessArgs {
    /// Sharpness grid as start:stop:points; defaults to 101 points on [0,1]
    #[arg(long)]
    pub grid: Option<String>,
    /// Objective evaluations per numerical min-entropy point
    #[arg(long)]
    pub budget: Option<usize>,
    /// Comma-separated seeds for the numerical search
    #[arg(long, default_value = "0")]
    pub seed: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Strategy JSON file to check
    pub strategy: PathBuf,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse the CLI arguments of the current process and run the command.
pub fn run() -> Result<()> {
    dispatch(&Cli::parse())
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    let (text, out) = match &cli.command {
        Command::Tradeoff(a) => (cmd_tradeoff(a)?, &a.output.out),
        Command::Sweep(a) => (cmd_sweep(a)?, &a.output.out),
        Command::Certify(a) => (cmd_certify(a)?, &a.out),
        Command::Chain(a) => (cmd_chain(a)?, &a.output.out),
        Command::Randomness(a) => (cmd_randomness(a)?, &a.output.out),
        Command::Selftest(a) => (cmd_selftest(a)?, &a.out),
    };
    emit(out, &text)
}

// ---------------------------------------------------------------------------
// plumbing

/// Format with 12 significant digits: plain decimal in a readable magnitude
/// window, scientific notation outside it. Stable across runs.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..12).contains(&mag) {
        let prec = (11 - mag).max(0) as usize;
        format!("{x:.prec$}")
    } else {
        format!("{x:.11e}")
    }
}

fn parse_grid(spec: &str) -> Result<(f64, f64, usize)> {
    let bad = |reason: String| Error::BadGrid { reason };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad(format!(
            "grid must be start:stop:points, got '{spec}'"
        )));
    }
    let start: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| bad(format!("grid start '{}' is not a number", parts[0])))?;
    let stop: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| bad(format!("grid stop '{}' is not a number", parts[1])))?;
    let points: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| bad(format!("grid points '{}' is not a count", parts[2])))?;
    if !start.is_finite() || !stop.is_finite() || start > stop {
        return Err(bad(format!("grid range {start}:{stop} is not ascending")));
    }
    if points < 2 {
        return Err(bad(format!("grid needs at least 2 points, got {points}")));
    }
    Ok((start, stop, points))
}

fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("seed '{p}' is not an unsigned integer")))
        })
        .collect()
}

fn check_budget(budget: Option<usize>) -> Result<Option<usize>> {
    if budget == Some(0) {
        return Err(Error::Parse("budget must be at least 1".to_string()));
    }
    Ok(budget)
}

fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    let step = (stop - start) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
        .collect()
}

fn io_at(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_at(path, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(Error::Io)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

// ---------------------------------------------------------------------------
// subcommands

#[derive(Serialize)]
struct TradeoffRow {
    target_ab: f64,
    bound: f64,
    classical_ac: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimized: Option<OptimizedCols>,
}

#[derive(Serialize)]
struct OptimizedCols {
    best_ac: f64,
    gap: f64,
    evaluations: usize,
    seed: u64,
}

fn cmd_tradeoff(args: &TradeoffArgs) -> Result<String> {
    let (start, stop, points) = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => (0.5, witness::ab_quantum_max(), 101),
    };
    let budget = check_budget(args.budget)?;
    let seeds = parse_seeds(&args.seed)?;
    let frontier = classical_frontier();
    let rows = linspace(start, stop, points)
        .into_iter()
        .map(|target| -> Result<TradeoffRow> {
            let bound = tradeoff_bound(target)?;
            let optimized = match budget {
                Some(b) => {
                    let found = maximize_ac(target, b, SearchMode::Param, &seeds)?;
                    Some(OptimizedCols {
                        best_ac: found.best_ac,
                        gap: bound - found.best_ac,
                        evaluations: found.evaluations,
                        seed: found.seed,
                    })
                }
                None => None,
            };
            Ok(TradeoffRow {
                target_ab: target,
                bound,
                classical_ac: frontier.best_ac_given_ab(target),
                optimized,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if args.output.format == Format::Json {
        return to_json(&rows);
    }
    let mut lines = vec![if budget.is_some() {
        "target_ab,bound,classical_ac,best_ac,gap,evaluations,seed".to_string()
    } else {
        "target_ab,bound,classical_ac".to_string()
    }];
    for r in &rows {
        let classical = r.classical_ac.map(fmt12).unwrap_or_default();
        let mut line = format!("{},{},{}", fmt12(r.target_ab), fmt12(r.bound), classical);
        if let Some(o) = &r.optimized {
            line = format!(
                "{line},{},{},{},{}",
                fmt12(o.best_ac),
                fmt12(o.gap),
                o.evaluations,
                o.seed
            );
        }
        lines.push(line);
    }
    Ok(lines.join("\n") + "\n")
}

#[derive(Serialize)]
struct SweepRow {
    eta: f64,
    a_ab: f64,
    a_ac: f64,
    classical_bound: f64,
    double_violation: bool,
}

fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    let (start, stop, points) = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => (0.0, 1.0, 101),
    };
    let rows = linspace(start, stop, points)
        .into_iter()
        .map(|eta| -> Result<SweepRow> {
            let table = joint_table(&Strategy::ideal(eta)?)?;
            let a_ab = witness::witness_ab(&table);
            let a_ac = witness::witness_ac(&table);
            Ok(SweepRow {
                eta,
                a_ab,
                a_ac,
                classical_bound: 0.75,
                double_violation: a_ab > 0.75 && a_ac > 0.75,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if args.output.format == Format::Json {
        return to_json(&rows);
    }
    let mut lines = vec!["eta,a_ab,a_ac,classical_bound,double_violation".to_string()];
    for r in &rows {
        lines.push(format!(
            "{},{},{},{},{}",
            fmt12(r.eta),
            fmt12(r.a_ab),
            fmt12(r.a_ac),
            fmt12(r.classical_bound),
            r.double_violation
        ));
    }
    Ok(lines.join("\n") + "\n")
}

#[derive(Serialize)]
struct CertReport {
    a_ab: f64,
    a_ac: f64,
    #[serde(flatten)]
    certificate: Certificate,
}

fn cmd_certify(args: &CertifyArgs) -> Result<String> {
    let certificate = certify(args.a_ab, args.a_ac)?;
    to_json(&CertReport {
        a_ab: args.a_ab,
        a_ac: args.a_ac,
        certificate,
    })
}

#[derive(Serialize)]
struct ChainRow {
    decoder: usize,
    simulated: f64,
    closed_form: f64,
}

fn cmd_chain(args: &ChainArgs) -> Result<String> {
    let simulated = sequential_chain(args.k)?;
    let rows: Vec<ChainRow> = simulated
        .iter()
        .enumerate()
        .map(|(i, &sim)| ChainRow {
            decoder: i + 1,
            simulated: sim,
            closed_form: 0.5 * (1.0 + SQRT3 / 3f64.powi(i as i32 + 1)),
        })
        .collect();
    if args.output.format == Format::Json {
        return to_json(&rows);
    }
    let mut lines = vec!["decoder,simulated,closed_form".to_string()];
    for r in &rows {
        lines.push(format!(
            "{},{},{}",
            r.decoder,
            fmt12(r.simulated),
            fmt12(r.closed_form)
        ));
    }
    Ok(lines.join("\n") + "\n")
}

#[derive(Serialize)]
struct RateReport {
    points: Vec<RatePoint>,
    crossover: CrossoverReport,
}

fn cmd_randomness(args: &RandomnessArgs) -> Result<String> {
    let (start, stop, points) = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => (0.0, 1.0, 101),
    };
    let budget = check_budget(args.budget)?.unwrap_or(DEFAULT_T3_BUDGET);
    let seeds = parse_seeds(&args.seed)?;
    let etas = linspace(start, stop, points);
    let rates = randomness::rate_sweep(&etas, budget, &seeds)?;
    let crossover = randomness::crossover_scan(1001, budget, &seeds)?;
    if args.output.format == Format::Json {
        return to_json(&RateReport {
            points: rates,
            crossover,
        });
    }
    let mut lines = vec![
        "eta,theta,w_ab,w_ac,hmin_w_bob,hmin_w_charlie,t2_ab,t2_ac,hmin_t2_bob,hmin_t2_charlie,t3_ab,t3_ac,hmin_t3_bob,hmin_t3_charlie".to_string(),
    ];
    for p in &rates {
        lines.push(
            [
                p.eta,
                p.theta,
                p.w_ab,
                p.w_ac,
                p.hmin_w_bob,
                p.hmin_w_charlie,
                p.t2_ab,
                p.t2_ac,
                p.hmin_t2_bob,
                p.hmin_t2_charlie,
                p.t3_ab,
                p.t3_ac,
                p.hmin_t3_bob,
                p.hmin_t3_charlie,
            ]
            .map(fmt12)
            .join(","),
        );
    }
    let opt12 = |v: Option<f64>| v.map(fmt12).unwrap_or_else(|| "none".to_string());
    lines.push(format!("# bob_threshold,{}", opt12(crossover.bob_threshold)));
    lines.push(format!(
        "# charlie_threshold,{}",
        opt12(crossover.charlie_threshold)
    ));
    lines.push(format!("# grid_spacing,{}", fmt12(crossover.grid_spacing)));
    Ok(lines.join("\n") + "\n")
}

fn cmd_selftest(args: &SelftestArgs) -> Result<String> {
    let text = fs::read_to_string(&args.strategy).map_err(|e| io_at(&args.strategy, e))?;
    let strategy = Strategy::from_json(&text)?;
    let report = canonicalize(&strategy, 1e-6)?;
    to_json(&report)
}
