//! Command-line front end for the peeling matcher: graph generation,
//! matching with optional verification, and seeded experiment batches that
//! write per-trial and aggregate reports.
//!
//! Exit codes: 0 success (and experiment tolerances met), 1 a tolerance or
//! verification check failed, 2 usage or IO error.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use matchpeel::stats::{in_window, t_index};
use matchpeel::{
    drift_report, excess_monitor, max_matching_exact, read_degrees, regular_sequence, rem_a_check,
    run_reduce, sample_configuration, sample_simple, survival_report, unwind, validate_matching,
    Monitors, MultiGraph, TraceRecord, DEFAULT_MAX_ATTEMPTS,
};

/// Endpoint-fraction ceiling checked by the `rem-a` experiment.
const P3_LIMIT: f64 = 0.081 + 0.005;
/// Perfect-matching and excess experiments demand this success rate.
const RATE_THRESHOLD: f64 = 0.99;
/// Survival experiment demands this success rate.
const SURVIVAL_THRESHOLD: f64 = 0.95;
/// Windowed edge drift must stay this close to its prediction.
const DRIFT_TOLERANCE: f64 = 0.05;
/// Acceptable log-log slope range for runtime scaling.
const SLOPE_RANGE: (f64, f64) = (0.8, 1.25);

#[derive(Parser)]
#[command(
    name = "matchpeel",
    version,
    about = "Peeling-based matching on random multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random multigraph from a degree sequence and write it as an
    /// edge list.
    Generate(GenerateArgs),
    /// Reduce a graph, build the matching by unwinding the log, and report.
    Match(MatchArgs),
    /// Run a seeded batch of trials and write JSON/CSV reports.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Regular sequence: N vertices, all of degree K.
    #[arg(long, num_args = 2, value_names = ["N", "K"], conflicts_with = "degrees")]
    regular: Option<Vec<usize>>,
    /// File with one degree per line (`#` comments and blank lines allowed).
    #[arg(long)]
    degrees: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reject parallel edges as well as loops.
    #[arg(long)]
    simple: bool,
    /// Resampling cap for the rejection loop.
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
}

#[derive(Args)]
struct MatchArgs {
    /// Input edge-list file.
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fall back to the exact matcher when the peeled matching is not
    /// perfect.
    #[arg(long)]
    fallback: bool,
    /// Cross-check the matching size against the exact matcher (graphs up to
    /// 200 vertices); a size mismatch exits with status 1.
    #[arg(long)]
    verify: bool,
    /// Write the matching here as text.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the action log here as JSON lines.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Write per-hyperaction trace rows here as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExperimentName {
    /// Fraction of trials whose matching is perfect.
    PerfectRate,
    /// Log-log slope of median matcher wall time across sizes.
    RuntimeScaling,
    /// Windowed mean edge change against its predicted value.
    Drift,
    /// Endpoint-fraction ceiling at dominant boundaries.
    #[value(alias = "remA")]
    RemA,
    /// Degree-excess ceiling and hyperaction goodness.
    Excess,
    /// Edge survival and stopping time of the high-degree phase.
    Survival,
}

impl ExperimentName {
    fn dir_name(self) -> &'static str {
        match self {
            ExperimentName::PerfectRate => "perfect-rate",
            ExperimentName::RuntimeScaling => "runtime-scaling",
            ExperimentName::Drift => "drift",
            ExperimentName::RemA => "rem-a",
            ExperimentName::Excess => "excess",
            ExperimentName::Survival => "survival",
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    name: ExperimentName,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Vertex counts; runtime-scaling uses the whole list, everything else
    /// the first entry.
    #[arg(long, value_delimiter = ',', default_value = "10000")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    k: usize,
    /// Report directory (overrides the MATCHPEEL_OUT_DIR environment
    /// variable; default `matchpeel-reports`).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Hyperactions per drift window.
    #[arg(long, default_value_t = 1000)]
    window: usize,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Generate(args) => cmd_generate(&args).map(|()| true),
        Command::Match(args) => cmd_match(&args),
        Command::Experiment(args) => cmd_experiment(&args),
    }
}

/// Mixes a batch seed and a trial index into one stream seed, so trials are
/// reproducible independently of scheduling order.
fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn open_input(path: &Path) -> Result<BufReader<File>, String> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn create_output(path: &Path) -> Result<BufWriter<File>, String> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut data =
        serde_json::to_string_pretty(value).map_err(|e| format!("serialize: {e}"))?;
    data.push('\n');
    fs::write(path, data).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), String> {
    let degrees: Vec<usize> = if let Some(pair) = &args.regular {
        regular_sequence(pair[0], pair[1]).map_err(|e| e.to_string())?
    } else if let Some(path) = &args.degrees {
        read_degrees(open_input(path)?).map_err(|e| e.to_string())?
    } else {
        return Err("pass either --regular N K or --degrees FILE".into());
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let g = if args.simple {
        sample_simple(&degrees, &mut rng, args.max_attempts)
    } else {
        sample_configuration(&degrees, &mut rng, args.max_attempts)
    }
    .map_err(|e| e.to_string())?;
    match &args.out {
        Some(path) => {
            let mut out = create_output(path)?;
            g.write_edge_list(&mut out).map_err(|e| e.to_string())?;
            out.flush().map_err(|e| e.to_string())?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            g.write_edge_list(&mut out).map_err(|e| e.to_string())?;
            out.flush().map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn trace_csv<W: Write>(trace: &[TraceRecord], out: &mut W) -> io::Result<()> {
    writeln!(
        out,
        "index,kind,edges,min_degree,max_degree,dominant,dominant_strict,histogram"
    )?;
    for rec in trace {
        let histogram = rec
            .histogram
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{histogram}",
            rec.index,
            rec.kind.as_str(),
            rec.edges,
            rec.min_degree,
            rec.max_degree,
            rec.dominant,
            rec.dominant_strict
        )?;
    }
    Ok(())
}

fn cmd_match(args: &MatchArgs) -> Result<bool, String> {
    let mut g = MultiGraph::read_edge_list(open_input(&args.graph)?).map_err(|e| e.to_string())?;
    let g0 = g.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    let started = Instant::now();
    let monitors = Monitors::from_graph(&mut g);
    let (log, trace) = run_reduce(&mut g, &mut rng, &monitors);
    let mut matching = unwind(&log, &g0, &mut rng).map_err(|e| e.to_string())?;
    let wall = started.elapsed();

    let mut report = validate_matching(&matching, &g0);
    let mut fallback_used = false;
    if args.fallback && !(report.valid && report.perfect) {
        matching = max_matching_exact(&g0);
        report = validate_matching(&matching, &g0);
        fallback_used = true;
    }

    let mut kinds: BTreeMap<&'static str, usize> = BTreeMap::new();
    for rec in trace.iter().skip(1) {
        *kinds.entry(rec.kind.as_str()).or_default() += 1;
    }
    let kind_summary = kinds
        .iter()
        .map(|(k, c)| format!("{k}={c}"))
        .collect::<Vec<_>>()
        .join(" ");

    println!(
        "size={} perfect={} valid={} wall_ms={:.3} fallback_used={}",
        report.size,
        report.perfect,
        report.valid,
        wall.as_secs_f64() * 1e3,
        fallback_used
    );
    println!("hyperactions: {kind_summary}");

    if let Some(path) = &args.out {
        let mut out = create_output(path)?;
        matching
            .write_text(&g0, &mut out)
            .map_err(|e| e.to_string())?;
        out.flush().map_err(|e| e.to_string())?;
    }
    if let Some(path) = &args.log {
        let mut out = create_output(path)?;
        log.write_jsonl(&mut out).map_err(|e| e.to_string())?;
        out.flush().map_err(|e| e.to_string())?;
    }
    if let Some(path) = &args.trace {
        let mut out = create_output(path)?;
        trace_csv(&trace, &mut out).map_err(|e| e.to_string())?;
        out.flush().map_err(|e| e.to_string())?;
    }

    if !report.valid {
        eprintln!("matching failed validation");
        return Ok(false);
    }
    if args.verify {
        if g0.vertex_count() <= 200 {
            let exact = max_matching_exact(&g0).len();
            println!("verify: exact={exact} matched={}", report.size);
            if report.size != exact {
                return Ok(false);
            }
        } else {
            eprintln!("verify skipped: graph has more than 200 vertices");
        }
    }
    Ok(true)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<bool, String> {
    if args.trials == 0 {
        return Err("--trials must be positive".into());
    }
    if args.n.is_empty() || args.n.iter().any(|&n| n == 0) {
        return Err("--n must list positive vertex counts".into());
    }
    let root = args
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("MATCHPEEL_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("matchpeel-reports"));
    let dir = root.join(args.name.dir_name());
    fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| match args.name {
        ExperimentName::PerfectRate => experiment_perfect_rate(args, &dir),
        ExperimentName::RuntimeScaling => experiment_runtime_scaling(args, &dir),
        ExperimentName::Drift => experiment_drift(args, &dir),
        ExperimentName::RemA => experiment_rem_a(args, &dir),
        ExperimentName::Excess => experiment_excess(args, &dir),
        ExperimentName::Survival => experiment_survival(args, &dir),
    })
}

fn sample_regular(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<MultiGraph, String> {
    let degrees = regular_sequence(n, k).map_err(|e| e.to_string())?;
    sample_configuration(&degrees, rng, DEFAULT_MAX_ATTEMPTS).map_err(|e| e.to_string())
}

/// Runs the reducer on a fresh sample and hands the trace to `summarize`.
/// The matching is built and validated only when `build_matching` is set.
fn trace_trial<T, F>(
    n: usize,
    k: usize,
    seed: u64,
    build_matching: bool,
    summarize: F,
) -> Result<T, String>
where
    F: FnOnce(&[TraceRecord], Option<(usize, bool, bool)>, f64) -> T,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = sample_regular(n, k, &mut rng)?;
    let g0 = if build_matching { Some(g.clone()) } else { None };
    let started = Instant::now();
    let monitors = Monitors::from_graph(&mut g);
    let (log, trace) = run_reduce(&mut g, &mut rng, &monitors);
    let matching = match &g0 {
        Some(g0) => {
            let m = unwind(&log, g0, &mut rng).map_err(|e| e.to_string())?;
            let report = validate_matching(&m, g0);
            Some((report.size, report.valid, report.perfect))
        }
        None => None,
    };
    let secs = started.elapsed().as_secs_f64();
    Ok(summarize(&trace, matching, secs))
}

fn write_trial_files<T: Serialize>(dir: &Path, rows: &[T]) -> Result<(), String> {
    for (t, row) in rows.iter().enumerate() {
        write_json(&dir.join(format!("trial_{t:04}.json")), row)?;
    }
    Ok(())
}

fn write_csv(dir: &Path, header: &str, rows: &[String]) -> Result<(), String> {
    let path = dir.join("aggregate.csv");
    let mut data = String::with_capacity(rows.len() * 32 + header.len() + 1);
    data.push_str(header);
    data.push('\n');
    for row in rows {
        data.push_str(row);
        data.push('\n');
    }
    fs::write(&path, data).map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct PerfectTrialRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    size: usize,
    valid: bool,
    peel_perfect: bool,
    fallback_used: bool,
    perfect: bool,
    matcher_secs: f64,
}

#[derive(Serialize)]
struct PerfectAggregate {
    experiment: &'static str,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    peel_perfect_trials: usize,
    fallback_trials: usize,
    perfect_trials: usize,
    rate: f64,
    threshold: f64,
    pass: bool,
}

fn experiment_perfect_rate(args: &ExperimentArgs, dir: &Path) -> Result<bool, String> {
    let n = args.n[0];
    let rows: Vec<PerfectTrialRow> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(args.seed, t as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = sample_regular(n, args.k, &mut rng)?;
            let g0 = g.clone();
            let started = Instant::now();
            let monitors = Monitors::from_graph(&mut g);
            let (log, _trace) = run_reduce(&mut g, &mut rng, &monitors);
            let m = unwind(&log, &g0, &mut rng).map_err(|e| e.to_string())?;
            let report = validate_matching(&m, &g0);
            let secs = started.elapsed().as_secs_f64();
            let peel_perfect = report.valid && report.perfect;
            // The full matcher keeps a perfect peel result and otherwise
            // defers to the exact algorithm (the fallback composition).
            let (size, perfect, fallback_used) = if peel_perfect {
                (report.size, true, false)
            } else {
                let exact = max_matching_exact(&g0);
                (exact.len(), exact.len() == n / 2, true)
            };
            Ok(PerfectTrialRow {
                trial: t,
                seed,
                n,
                k: args.k,
                size,
                valid: report.valid,
                peel_perfect,
                fallback_used,
                perfect,
                matcher_secs: secs,
            })
        })
        .collect::<Result<_, String>>()?;
    let peel_perfect_trials = rows.iter().filter(|r| r.peel_perfect).count();
    let fallback_trials = rows.iter().filter(|r| r.fallback_used).count();
    let perfect_trials = rows.iter().filter(|r| r.valid && r.perfect).count();
    let rate = perfect_trials as f64 / args.trials as f64;
    let aggregate = PerfectAggregate {
        experiment: "perfect-rate",
        n,
        k: args.k,
        trials: args.trials,
        seed: args.seed,
        peel_perfect_trials,
        fallback_trials,
        perfect_trials,
        rate,
        threshold: RATE_THRESHOLD,
        pass: rate >= RATE_THRESHOLD,
    };
    write_trial_files(dir, &rows)?;
    write_csv(
        dir,
        "trial,seed,size,valid,peel_perfect,fallback_used,perfect,matcher_secs",
        &rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{:.6}",
                    r.trial,
                    r.seed,
                    r.size,
                    r.valid,
                    r.peel_perfect,
                    r.fallback_used,
                    r.perfect,
                    r.matcher_secs
                )
            })
            .collect::<Vec<_>>(),
    )?;
    write_json(&dir.join("aggregate.json"), &aggregate)?;
    println!(
        "perfect-rate: {perfect_trials}/{} perfect (peel alone {peel_perfect_trials}, \
         fallback used {fallback_trials}), rate {rate:.3}, pass={}",
        args.trials, aggregate.pass
    );
    Ok(aggregate.pass)
}

#[derive(Serialize)]
struct ScalingTrialRow {
    n: usize,
    trial: usize,
    seed: u64,
    matcher_secs: f64,
}

#[derive(Serialize)]
struct ScalingAggregate {
    experiment: &'static str,
    k: usize,
    trials: usize,
    seed: u64,
    sizes: Vec<usize>,
    median_secs: Vec<f64>,
    slope: f64,
    slope_range: (f64, f64),
    pass: bool,
}

fn experiment_runtime_scaling(args: &ExperimentArgs, dir: &Path) -> Result<bool, String> {
    if args.n.len() < 2 {
        return Err("runtime-scaling needs at least two sizes in --n".into());
    }
    let mut rows: Vec<ScalingTrialRow> = Vec::new();
    let mut medians: Vec<f64> = Vec::new();
    for &n in &args.n {
        let mut times = Vec::with_capacity(args.trials);
        for t in 0..args.trials {
            let seed = trial_seed(args.seed ^ (n as u64).rotate_left(32), t as u64);
            let secs = trace_trial(n, args.k, seed, true, |_, matching, secs| {
                let (_, valid, _) = matching.expect("matching requested");
                assert!(valid, "matching failed validation");
                secs
            })?;
            times.push(secs);
            rows.push(ScalingTrialRow {
                n,
                trial: t,
                seed,
                matcher_secs: secs,
            });
        }
        times.sort_by(f64::total_cmp);
        let mid = times.len() / 2;
        let median = if times.len() % 2 == 0 {
            (times[mid - 1] + times[mid]) / 2.0
        } else {
            times[mid]
        };
        medians.push(median);
    }
    let xs: Vec<f64> = args.n.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = medians.iter().map(|&m| m.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = num / den;
    let pass = slope >= SLOPE_RANGE.0 && slope <= SLOPE_RANGE.1;
    let aggregate = ScalingAggregate {
        experiment: "runtime-scaling",
        k: args.k,
        trials: args.trials,
        seed: args.seed,
        sizes: args.n.clone(),
        median_secs: medians,
        slope,
        slope_range: SLOPE_RANGE,
        pass,
    };
    write_trial_files(dir, &rows)?;
    write_csv(
        dir,
        "n,trial,seed,matcher_secs",
        &rows
            .iter()
            .map(|r| format!("{},{},{},{:.6}", r.n, r.trial, r.seed, r.matcher_secs))
            .collect::<Vec<_>>(),
    )?;
    write_json(&dir.join("aggregate.json"), &aggregate)?;
    println!("runtime-scaling: slope {slope:.3}, pass={pass}");
    Ok(pass)
}

#[derive(Serialize)]
struct DriftTrialRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    boundary: usize,
    windows: usize,
    worst_gap: f64,
}

#[derive(Serialize)]
struct DriftAggregate {
    experiment: &'static str,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    window: usize,
    total_windows: usize,
    worst_gap: f64,
    tolerance: f64,
    pass: bool,
}

fn experiment_drift(args: &ExperimentArgs, dir: &Path) -> Result<bool, String> {
    let n = args.n[0];
    let window = args.window;
    let results: Vec<(DriftTrialRow, String)> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(args.seed, t as u64);
            trace_trial(n, args.k, seed, false, |trace, _, _| {
                let boundary = t_index(trace, args.k - 1, n).min(trace.len() - 1);
                let report = drift_report(&trace[..=boundary], window, args.k, n)
                    .map_err(|e| e.to_string())?;
                let worst = report
                    .windows
                    .iter()
                    .map(|w| (w.observed_edge_drift - w.predicted_edge_drift).abs())
                    .fold(0.0, f64::max);
                Ok((
                    DriftTrialRow {
                        trial: t,
                        seed,
                        n,
                        k: args.k,
                        boundary,
                        windows: report.windows.len(),
                        worst_gap: worst,
                    },
                    report.windows_csv(),
                ))
            })?
        })
        .collect::<Result<_, String>>()?;
    let mut rows = Vec::with_capacity(results.len());
    for (row, csv) in results {
        let path = dir.join(format!("windows_{:04}.csv", row.trial));
        fs::write(&path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
        rows.push(row);
    }
    let total_windows: usize = rows.iter().map(|r| r.windows).sum();
    let worst_gap = rows.iter().map(|r| r.worst_gap).fold(0.0, f64::max);
    let pass = total_windows > 0 && worst_gap <= DRIFT_TOLERANCE;
    let aggregate = DriftAggregate {
        experiment: "drift",
        n,
        k: args.k,
        trials: args.trials,
        seed: args.seed,
        window,
        total_windows,
        worst_gap,
        tolerance: DRIFT_TOLERANCE,
        pass,
    };
    write_trial_files(dir, &rows)?;
    write_csv(
        dir,
        "trial,seed,boundary,windows,worst_gap",
        &rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{:.6}",
                    r.trial, r.seed, r.boundary, r.windows, r.worst_gap
                )
            })
            .collect::<Vec<_>>(),
    )?;
    write_json(&dir.join("aggregate.json"), &aggregate)?;
    println!(
        "drift: {total_windows} windows, worst gap {worst_gap:.4} against {DRIFT_TOLERANCE}, \
         pass={pass}"
    );
    Ok(pass)
}

#[derive(Serialize)]
struct RemATrialRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    checked: usize,
    max_p3: f64,
    limit_violations: usize,
    report: matchpeel::RemAReport,
}

#[derive(Serialize)]
struct RemAAggregate {
    experiment: &'static str,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    checked: usize,
    max_p3: f64,
    limit: f64,
    violations: usize,
    pass: bool,
}

fn experiment_rem_a(args: &ExperimentArgs, dir: &Path) -> Result<bool, String> {
    let n = args.n[0];
    let rows: Vec<RemATrialRow> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(args.seed, t as u64);
            trace_trial(n, args.k, seed, false, |trace, _, _| {
                let report = rem_a_check(trace, args.k, n, 0.005);
                let limit_violations = trace
                    .iter()
                    .filter(|r| in_window(r, args.k - 1, n) && r.p(3) > P3_LIMIT)
                    .count();
                RemATrialRow {
                    trial: t,
                    seed,
                    n,
                    k: args.k,
                    checked: report.checked,
                    max_p3: report.max_p3,
                    limit_violations,
                    report,
                }
            })
        })
        .collect::<Result<_, _>>()?;
    let checked: usize = rows.iter().map(|r| r.checked).sum();
    let max_p3 = rows.iter().map(|r| r.max_p3).fold(0.0, f64::max);
    let violations: usize = rows.iter().map(|r| r.limit_violations).sum();
    let pass = checked > 0 && violations == 0;
    let aggregate = RemAAggregate {
        experiment: "rem-a",
        n,
        k: args.k,
        trials: args.trials,
        seed: args.seed,
        checked,
        max_p3,
        limit: P3_LIMIT,
        violations,
        pass,
    };
    write_trial_files(dir, &rows)?;
    write_csv(
        dir,
        "trial,seed,checked,max_p3,limit_violations",
        &rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{:.6},{}",
                    r.trial, r.seed, r.checked, r.max_p3, r.limit_violations
                )
            })
            .collect::<Vec<_>>(),
    )?;
    write_json(&dir.join("aggregate.json"), &aggregate)?;
    println!(
        "rem-a: {checked} boundaries, max p3 {max_p3:.4} against {P3_LIMIT}, \
         {violations} violations, pass={pass}"
    );
    Ok(pass)
}

#[derive(Serialize)]
struct ExcessTrialRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    ok: bool,
    report: matchpeel::ExcessReport,
}

#[derive(Serialize)]
struct ExcessAggregate {
    experiment: &'static str,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    ok_trials: usize,
    rate: f64,
    threshold: f64,
    pass: bool,
}

fn experiment_excess(args: &ExperimentArgs, dir: &Path) -> Result<bool, String> {
    let n = args.n[0];
    let rows: Vec<ExcessTrialRow> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(args.seed, t as u64);
            trace_trial(n, args.k, seed, false, |trace, _, _| {
                let report = excess_monitor(trace, args.k, n);
                ExcessTrialRow {
                    trial: t,
                    seed,
                    n,
                    k: args.k,
                    ok: report.within && report.bad_count == 0,
                    report,
                }
            })
        })
        .collect::<Result<_, _>>()?;
    let ok_trials = rows.iter().filter(|r| r.ok).count();
    let rate = ok_trials as f64 / args.trials as f64;
    let pass = rate >= RATE_THRESHOLD;
    let aggregate = ExcessAggregate {
        experiment: "excess",
        n,
        k: args.k,
        trials: args.trials,
        seed: args.seed,
        ok_trials,
        rate,
        threshold: RATE_THRESHOLD,
        pass,
    };
    write_trial_files(dir, &rows)?;
    write_csv(
        dir,
        "trial,seed,ok,max_excess,bad_count",
        &rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{}",
                    r.trial, r.seed, r.ok, r.report.max_excess, r.report.bad_count
                )
            })
            .collect::<Vec<_>>(),
    )?;
    write_json(&dir.join("aggregate.json"), &aggregate)?;
    println!(
        "excess: {ok_trials}/{} within bounds (rate {rate:.3}), pass={pass}",
        args.trials
    );
    Ok(pass)
}

#[derive(Serialize)]
struct SurvivalTrialRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    ok: bool,
    report: matchpeel::SurvivalReport,
}

#[derive(Serialize)]
struct SurvivalAggregate {
    experiment: &'static str,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    ok_trials: usize,
    rate: f64,
    threshold: f64,
    pass: bool,
}

fn experiment_survival(args: &ExperimentArgs, dir: &Path) -> Result<bool, String> {
    let n = args.n[0];
    let rows: Vec<SurvivalTrialRow> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(args.seed, t as u64);
            trace_trial(n, args.k, seed, false, |trace, _, _| {
                let report = survival_report(trace, args.k, n);
                SurvivalTrialRow {
                    trial: t,
                    seed,
                    n,
                    k: args.k,
                    ok: report.edge_ok && report.time_ok,
                    report,
                }
            })
        })
        .collect::<Result<_, _>>()?;
    let ok_trials = rows.iter().filter(|r| r.ok).count();
    let rate = ok_trials as f64 / args.trials as f64;
    let pass = rate >= SURVIVAL_THRESHOLD;
    let aggregate = SurvivalAggregate {
        experiment: "survival",
        n,
        k: args.k,
        trials: args.trials,
        seed: args.seed,
        ok_trials,
        rate,
        threshold: SURVIVAL_THRESHOLD,
        pass,
    };
    write_trial_files(dir, &rows)?;
    write_csv(
        dir,
        "trial,seed,ok,tau,edge_ratio",
        &rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{:.6}",
                    r.trial, r.seed, r.ok, r.report.tau, r.report.ratio
                )
            })
            .collect::<Vec<_>>(),
    )?;
    write_json(&dir.join("aggregate.json"), &aggregate)?;
    println!(
        "survival: {ok_trials}/{} within bounds (rate {rate:.3}), pass={pass}",
        args.trials
    );
    Ok(pass)
}
