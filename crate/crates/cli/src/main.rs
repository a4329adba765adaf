//! Command-line front end: solve, decide, verify, generate, stats, bench.
//!
//! Exit codes are part of the contract: 0 success (and "colorable" /
//! "valid" for decide and verify), 1 negative answer, 2 malformed input,
//! 3 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use kpath_core::{
    chromatic_number, generate, parse_instance, serialize_instance, serialize_layout, stats,
    verify_coloring, Coloring, GenParams, Instance, InstanceStats, SolveOptions, SolveResult,
    Strategy,
};

#[derive(Parser)]
#[command(
    name = "kpath",
    version,
    about = "Path-partition coloring of conflict graphs"
)]
struct Cli {
    /// Worker threads for component solving and batch runs (default: cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolveFlags {
    /// Path budgets to solve for; defaults to the k stored in the file.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    /// Decomposition heuristic: min-degree, min-fill, or best-of-both.
    #[arg(long, default_value = "best-of-both")]
    strategy: String,
    /// Reconstruct and verify a witness coloring.
    #[arg(long)]
    certificate: bool,
    /// Also write the witness as `<vertex> <color>` lines to this file.
    #[arg(long)]
    cert_out: Option<PathBuf>,
    /// Solve the graph in one piece instead of splitting along components
    /// and non-fusable bridges.
    #[arg(long)]
    no_split: bool,
    /// Machine-readable report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute chromatic numbers and a full run report.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Is the instance colorable with a given palette? Exit 0 yes, 1 no.
    Decide {
        instance: PathBuf,
        /// Palette size L.
        #[arg(long)]
        colors: u32,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value = "best-of-both")]
        strategy: String,
        #[arg(long)]
        no_split: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a coloring file against an instance. Exit 0 valid, 1 not.
    Verify {
        instance: PathBuf,
        /// File with one `<vertex> <color>` pair per line.
        coloring: PathBuf,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Generate a pseudo-industrial instance and its point layout.
    Gen {
        /// Number of vertices.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Conflict distance; defaults to the calibrated value.
        #[arg(long)]
        dlith: Option<u32>,
        /// Lower end of the fusable window.
        #[arg(long)]
        ddsa: Option<u32>,
        #[arg(long)]
        pitch: Option<u32>,
        #[arg(long)]
        region_width: Option<u32>,
        #[arg(long)]
        region_height: Option<u32>,
        /// Default path budget stored in the file.
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Instance path; the layout sidecar gets a `.layout` suffix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print instance statistics.
    Stats {
        instance: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Solve every instance in a directory and emit a CSV table.
    Bench {
        /// Directory scanned (non-recursively) for `.kpath` files.
        suite: PathBuf,
        /// Path budgets, one chi/time column pair each.
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2])]
        k: Vec<u32>,
        /// Timing repetitions per solve; the minimum is reported.
        #[arg(long, default_value_t = 1)]
        repeat: u32,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn input(path: &Path, msg: impl std::fmt::Display) -> CliError {
        CliError::Input {
            path: path.display().to_string(),
            msg: msg.to_string(),
        }
    }

    fn code(&self) -> ExitCode {
        match self {
            CliError::Input { .. } => ExitCode::from(2),
            CliError::Internal(_) => ExitCode::from(3),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Solve { instance, flags } => cmd_solve(&instance, &flags),
        Command::Decide {
            instance,
            colors,
            k,
            strategy,
            no_split,
            json,
        } => cmd_decide(&instance, colors, k, &strategy, no_split, json),
        Command::Verify {
            instance,
            coloring,
            k,
        } => cmd_verify(&instance, &coloring, k),
        Command::Gen {
            n,
            seed,
            dlith,
            ddsa,
            pitch,
            region_width,
            region_height,
            k,
            out,
        } => cmd_gen(
            n,
            seed,
            dlith,
            ddsa,
            pitch,
            region_width,
            region_height,
            k,
            &out,
        ),
        Command::Stats { instance, json } => cmd_stats(&instance, json),
        Command::Bench {
            suite,
            k,
            repeat,
            out,
        } => cmd_bench(&suite, &k, repeat, out.as_deref()),
    }
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(path, e))?;
    parse_instance(&text).map_err(|e| CliError::input(path, e))
}

fn parse_strategy(s: &str) -> Result<Strategy, CliError> {
    s.parse::<Strategy>().map_err(|e| CliError::Input {
        path: "--strategy".into(),
        msg: e.to_string(),
    })
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Serialize)]
struct StatsReport {
    n: usize,
    m: usize,
    f: usize,
    omega: usize,
    omega_exact: bool,
    max_degree: usize,
    width: usize,
    components: usize,
    max_component: usize,
}

impl From<&InstanceStats> for StatsReport {
    fn from(s: &InstanceStats) -> StatsReport {
        StatsReport {
            n: s.n,
            m: s.m,
            f: s.f_count,
            omega: s.omega,
            omega_exact: s.omega_exact,
            max_degree: s.max_degree,
            width: s.width,
            components: s.components,
            max_component: s.max_component,
        }
    }
}

#[derive(Serialize)]
struct PhaseTimes {
    decompose_ms: f64,
    nicify_ms: f64,
    /// One `[L, milliseconds]` entry per attempted palette size.
    decide_ms: Vec<(u32, f64)>,
    certificate_ms: f64,
    total_ms: f64,
}

#[derive(Serialize)]
struct SolveEntry {
    k: u32,
    colorable: bool,
    chromatic: u32,
    times: PhaseTimes,
    #[serde(skip_serializing_if = "Option::is_none")]
    coloring: Option<Vec<u32>>,
    /// Present exactly when a certificate was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

#[derive(Serialize)]
struct RunReport {
    schema: u32,
    instance: String,
    stats: StatsReport,
    results: Vec<SolveEntry>,
}

fn solve_entry(
    inst: &Instance,
    k: u32,
    opts: &SolveOptions,
    wants_cert: bool,
) -> Result<SolveEntry, CliError> {
    let t = Instant::now();
    let r: SolveResult =
        chromatic_number(&inst.graph, k, opts).map_err(|e| CliError::Internal(e.to_string()))?;
    let total = t.elapsed();
    let chromatic = r
        .chromatic
        .ok_or_else(|| CliError::Internal("missing chromatic number".into()))?;
    let verified = if wants_cert {
        let coloring = r
            .coloring
            .as_ref()
            .ok_or_else(|| CliError::Internal("missing certificate".into()))?;
        let report = verify_coloring(&inst.graph, coloring, k)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        if !report.valid {
            return Err(CliError::Internal("certificate failed verification".into()));
        }
        Some(true)
    } else {
        None
    };
    Ok(SolveEntry {
        k,
        colorable: r.colorable,
        chromatic,
        times: PhaseTimes {
            decompose_ms: ms(r.stats.decompose_time),
            nicify_ms: ms(r.stats.nicify_time),
            decide_ms: r
                .stats
                .decide_times
                .iter()
                .map(|&(l, d)| (l, ms(d)))
                .collect(),
            certificate_ms: ms(r.stats.certificate_time),
            total_ms: ms(total),
        },
        coloring: r.coloring.map(|c| c.colors().to_vec()),
        verified,
    })
}

fn print_human_stats(s: &InstanceStats) {
    let exact = if s.omega_exact { "" } else { " (greedy bound)" };
    println!(
        "n {}, m {}, |F| {}, omega {}{exact}, Delta {}, width {}, components {} (largest {})",
        s.n, s.m, s.f_count, s.omega, s.max_degree, s.width, s.components, s.max_component
    );
}

fn cmd_solve(path: &Path, flags: &SolveFlags) -> Result<ExitCode, CliError> {
    let inst = load_instance(path)?;
    let opts = SolveOptions {
        strategy: parse_strategy(&flags.strategy)?,
        certificate: flags.certificate || flags.cert_out.is_some(),
        split: !flags.no_split,
        ..SolveOptions::default()
    };
    let ks = if flags.k.is_empty() {
        vec![inst.k]
    } else {
        flags.k.clone()
    };
    let s = stats(&inst.graph);
    let mut results = Vec::new();
    for &k in &ks {
        results.push(solve_entry(&inst, k, &opts, opts.certificate)?);
    }
    if let Some(cert_path) = &flags.cert_out {
        let coloring = results[0].coloring.as_ref().expect("certificate computed");
        let mut text = String::new();
        for (v, c) in coloring.iter().enumerate() {
            text.push_str(&format!("{v} {c}\n"));
        }
        fs::write(cert_path, text).map_err(|e| CliError::input(cert_path, e))?;
    }
    if flags.json {
        let report = RunReport {
            schema: 1,
            instance: path.display().to_string(),
            stats: (&s).into(),
            results,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
        return Ok(ExitCode::SUCCESS);
    }
    println!("instance {}", path.display());
    print_human_stats(&s);
    for e in &results {
        let decides: Vec<String> = e
            .times
            .decide_ms
            .iter()
            .map(|(l, t)| format!("L{l} {t:.3} ms"))
            .collect();
        let verified = match e.verified {
            Some(true) => " [certificate verified]",
            _ => "",
        };
        println!(
            "k={}: chi = {}{verified} (decompose {:.3} ms, nicify {:.3} ms, decide {}, total {:.3} ms)",
            e.k,
            e.chromatic,
            e.times.decompose_ms,
            e.times.nicify_ms,
            decides.join(" "),
            e.times.total_ms
        );
        if let Some(coloring) = &e.coloring {
            println!("coloring (k={}):", e.k);
            for (v, c) in coloring.iter().enumerate() {
                println!("{v} {c}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_decide(
    path: &Path,
    colors: u32,
    k: Option<u32>,
    strategy: &str,
    no_split: bool,
    json: bool,
) -> Result<ExitCode, CliError> {
    let inst = load_instance(path)?;
    let k = k.unwrap_or(inst.k);
    let strategy = parse_strategy(strategy)?;
    // Decide via the same per-part pipeline as solve, stopping the palette
    // search at L: colorable iff the chromatic number is within L. The
    // split changes nothing about the answer.
    let opts = SolveOptions {
        strategy,
        split: !no_split,
        ..SolveOptions::default()
    };
    let r =
        chromatic_number(&inst.graph, k, &opts).map_err(|e| CliError::Internal(e.to_string()))?;
    let chi = r
        .chromatic
        .ok_or_else(|| CliError::Internal("missing chromatic number".into()))?;
    let colorable = chi <= colors;
    if json {
        let out = serde_json::json!({
            "schema": 1,
            "instance": path.display().to_string(),
            "k": k,
            "colors": colors,
            "colorable": colorable,
        });
        println!("{out}");
    } else {
        println!(
            "{} with {colors} colors at k={k}",
            if colorable {
                "colorable"
            } else {
                "not colorable"
            }
        );
    }
    Ok(if colorable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn parse_coloring_file(path: &Path, n: usize) -> Result<Coloring, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(path, e))?;
    let mut assigned: Vec<Option<u32>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let [v, c] = tokens[..] else {
            return Err(CliError::input(
                path,
                format!("line {line}: expected `<vertex> <color>`"),
            ));
        };
        let v: usize = v
            .parse()
            .map_err(|_| CliError::input(path, format!("line {line}: bad vertex {v:?}")))?;
        let c: u32 = c
            .parse()
            .map_err(|_| CliError::input(path, format!("line {line}: bad color {c:?}")))?;
        if v >= n {
            return Err(CliError::input(
                path,
                format!("line {line}: vertex {v} out of range"),
            ));
        }
        if assigned[v].is_some() {
            return Err(CliError::input(
                path,
                format!("line {line}: vertex {v} assigned twice"),
            ));
        }
        assigned[v] = Some(c);
    }
    let mut colors = Vec::with_capacity(n);
    for (v, c) in assigned.into_iter().enumerate() {
        colors.push(c.ok_or_else(|| CliError::input(path, format!("vertex {v} missing")))?);
    }
    let num = colors.iter().max().map_or(0, |&m| m + 1);
    Coloring::new(colors, num).map_err(|e| CliError::input(path, e))
}

fn cmd_verify(instance: &Path, coloring: &Path, k: Option<u32>) -> Result<ExitCode, CliError> {
    let inst = load_instance(instance)?;
    let k = k.unwrap_or(inst.k);
    let coloring = parse_coloring_file(coloring, inst.graph.n())?;
    let report =
        verify_coloring(&inst.graph, &coloring, k).map_err(|e| CliError::input(instance, e))?;
    if report.valid {
        println!("valid: {} classes, k={k}", coloring.used_colors());
        Ok(ExitCode::SUCCESS)
    } else {
        for (color, verdict) in report.classes.iter().enumerate() {
            if let Some(violation) = &verdict.violation {
                println!("class {color} invalid: {violation:?}");
            }
        }
        Ok(ExitCode::from(1))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    n: usize,
    seed: u64,
    dlith: Option<u32>,
    ddsa: Option<u32>,
    pitch: Option<u32>,
    region_width: Option<u32>,
    region_height: Option<u32>,
    k: u32,
    out: &Path,
) -> Result<ExitCode, CliError> {
    let mut params = GenParams::for_n(n, seed);
    if let Some(d) = dlith {
        params.d_lith = d;
    }
    if let Some(d) = ddsa {
        params.d_dsa_min = d;
    }
    if let Some(p) = pitch {
        params.pitch = p;
    }
    if let Some(w) = region_width {
        params.region_width = w;
    }
    if let Some(h) = region_height {
        params.region_height = h;
    }
    let layout = generate(&params).map_err(|e| CliError::input(out, e))?;
    let inst = Instance {
        graph: layout.graph.clone(),
        k,
    };
    fs::write(out, serialize_instance(&inst)).map_err(|e| CliError::input(out, e))?;
    let layout_path = PathBuf::from(format!("{}.layout", out.display()));
    fs::write(&layout_path, serialize_layout(&layout))
        .map_err(|e| CliError::input(&layout_path, e))?;
    println!(
        "wrote {} ({} vertices, {} edges) and {}",
        out.display(),
        layout.graph.n(),
        layout.graph.m(),
        layout_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(path: &Path, json: bool) -> Result<ExitCode, CliError> {
    let inst = load_instance(path)?;
    let s = stats(&inst.graph);
    if json {
        let out = serde_json::json!({
            "schema": 1,
            "instance": path.display().to_string(),
            "k": inst.k,
            "stats": StatsReport::from(&s),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("stats serialize")
        );
    } else {
        println!("instance {} (k={})", path.display(), inst.k);
        print_human_stats(&s);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    suite: &Path,
    ks: &[u32],
    repeat: u32,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(suite)
        .map_err(|e| CliError::input(suite, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "kpath"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::input(suite, "no .kpath instances found"));
    }
    let instances: Result<Vec<(String, Instance)>, CliError> = paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string());
            Ok((name, load_instance(p)?))
        })
        .collect();
    let instances = instances?;

    let mut csv = String::from("name,n,m,f,omega,delta,width");
    for k in ks {
        csv.push_str(&format!(",chi{k},t{k}"));
    }
    csv.push('\n');

    use rayon::prelude::*;
    // Rows are computed concurrently but collected in path order, so the
    // output is sorted by instance name however long each solve takes.
    let rows: Result<Vec<String>, CliError> = instances
        .par_iter()
        .map(|(name, inst)| {
            let s = stats(&inst.graph);
            let mut row = format!(
                "{name},{},{},{},{},{},{}",
                s.n, s.m, s.f_count, s.omega, s.max_degree, s.width
            );
            for &k in ks {
                let mut best: Option<(u32, Duration)> = None;
                for _ in 0..repeat.max(1) {
                    let t = Instant::now();
                    let r = chromatic_number(&inst.graph, k, &SolveOptions::default())
                        .map_err(|e| CliError::Internal(e.to_string()))?;
                    let elapsed = t.elapsed();
                    let chi = r
                        .chromatic
                        .ok_or_else(|| CliError::Internal("missing chromatic number".into()))?;
                    best = match best {
                        Some((c, d)) if d <= elapsed => Some((c, d)),
                        _ => Some((chi, elapsed)),
                    };
                }
                let (chi, d) = best.expect("at least one repetition");
                row.push_str(&format!(",{chi},{:.6}", d.as_secs_f64()));
            }
            row.push('\n');
            Ok(row)
        })
        .collect();
    for row in rows? {
        csv.push_str(&row);
    }
    match out {
        Some(path) => fs::write(path, csv).map_err(|e| CliError::input(path, e))?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}
