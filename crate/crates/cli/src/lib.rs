//! Command-line surface for `mdst-core`: solve, verify, exact, gen and bench.
//!
//! Every command writes to caller-supplied streams and returns an exit code,
//! so the binary is a thin wrapper and tests can run commands in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdst_core::driver::PhaseThresholds;
use mdst_core::oracle::{exact_mdst, generate, GenKind, GenSpec, OracleError};
use mdst_core::{
    improved_mdst, parse_graph, verify_certificate, Graph, GraphFormat, LowerBoundCertificate, RunConfig,
    RunResult, SpanningTree,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

pub const BENCH_HEADER: &str = "n,m,eps,wall_ms,tree_degree,degred_calls";

#[derive(Debug, Error)]
pub enum CliError {
    /// Verification failed; the message names the violation.
    #[error("{0}")]
    Rejected(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rejected(_) => EXIT_REJECTED,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mdst", version, about = "Near-minimum-degree spanning trees with lower-bound certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a spanning tree of low maximum degree.
    Solve(SolveArgs),
    /// Check a certificate against a graph and tree.
    Verify(VerifyArgs),
    /// Minimum tree degree by exhaustive search (at most 9 vertices).
    Exact(ExactArgs),
    /// Write a generated graph.
    Gen(GenArgs),
    /// Time the solver over a ladder of random graphs and print CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Accuracy, in (0, 1/6).
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the tree as "u v" lines with 0-based ids.
    #[arg(long)]
    pub emit_tree: Option<PathBuf>,
    #[arg(long)]
    pub emit_cert: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Report wall_ms as null so reports compare byte for byte.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long, hide = true)]
    pub large_step_threshold: Option<f64>,
    #[arg(long, hide = true)]
    pub small_step_threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    /// `p edge n m` header and 1-based `e u v` lines.
    Dimacs,
    /// Bare 0-based `u v` lines.
    Edges,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// path, cycle, star, complete, gnp, hypercube, wheel, ham-path-plus-edges or broom.
    pub family: String,
    /// Vertex count (dimension for hypercube).
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// Extra edges (ham-path-plus-edges) or bristles (broom).
    #[arg(long, default_value_t = 0)]
    pub extra: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutFormat::Dimacs)]
    pub format: OutFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 12)]
    pub min_exp: u32,
    #[arg(long, default_value_t = 17)]
    pub max_exp: u32,
    #[arg(long, default_value_t = 8.0)]
    pub avg_degree: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Timed solves per ladder point; the minimum is reported.
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Worker threads, one ladder point per worker.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl Default for BenchArgs {
    fn default() -> Self {
        BenchArgs { min_exp: 12, max_exp: 17, avg_degree: 8.0, epsilon: 0.1, seed: 0, repeats: 5, jobs: 1 }
    }
}

/// Machine-readable summary of one solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub m: usize,
    pub eps_user: f64,
    pub seed: u64,
    pub tree_degree: usize,
    pub phase: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_bound: Option<usize>,
    pub degred_calls: usize,
    pub modifications: usize,
    pub wall_ms: Option<f64>,
}

impl SolveReport {
    pub fn from_run(g: &Graph, cfg: &RunConfig, r: &RunResult, timing: bool) -> SolveReport {
        SolveReport {
            n: g.n(),
            m: g.m(),
            eps_user: cfg.eps_user,
            seed: cfg.seed,
            tree_degree: r.tree.max_degree(),
            phase: r.phase.as_str().to_string(),
            certificate_bound: r.certificate.as_ref().map(|c| c.bound),
            degred_calls: r.stats.degred_calls,
            modifications: r.stats.modifications,
            wall_ms: timing.then_some(r.stats.wall_ms),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mut row = |k: &str, v: String| {
            let _ = writeln!(out, "{k:<18} {v}");
        };
        row("vertices", self.n.to_string());
        row("edges", self.m.to_string());
        row("epsilon", self.eps_user.to_string());
        row("seed", self.seed.to_string());
        row("tree degree", self.tree_degree.to_string());
        row("phase", self.phase.clone());
        if let Some(b) = self.certificate_bound {
            row("certified bound", b.to_string());
        }
        row("degred calls", self.degred_calls.to_string());
        row("modifications", self.modifications.to_string());
        row("wall ms", self.wall_ms.map_or("-".into(), |w| format!("{w:.3}")));
        out
    }
}

/// One row of the bench CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    pub wall_ms: f64,
    pub tree_degree: usize,
    pub degred_calls: usize,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!("{},{},{},{:.3},{},{}", self.n, self.m, self.eps, self.wall_ms, self.tree_degree, self.degred_calls)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = read(path)?;
    parse_graph(&text, GraphFormat::detect(&text)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Tree edges as `u v` lines with 0-based ids, in ascending edge id.
pub fn tree_to_text(g: &Graph, t: &SpanningTree) -> String {
    let mut out = String::with_capacity(t.edge_count() * 12);
    for e in t.edge_ids() {
        let (u, v) = g.endpoints(e);
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Reads a tree file. Malformed lines are input errors; edges missing from
/// the graph or sets that do not span are rejections.
pub fn parse_tree(g: &Graph, text: &str) -> Result<SpanningTree, CliError> {
    let mut ids = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = toks.iter().map(|s| s.parse().ok()).collect();
        let (u, v) = match parsed.as_deref() {
            Some(&[u, v]) => (u, v),
            _ => return Err(CliError::Input(format!("tree line {}: malformed {raw:?}", i + 1))),
        };
        if u >= g.n() || v >= g.n() {
            return Err(CliError::Rejected(format!("BadTree: line {}: vertex out of range", i + 1)));
        }
        let e = g
            .edge_id(u, v)
            .ok_or_else(|| CliError::Rejected(format!("BadTree: line {}: ({u}, {v}) is not a graph edge", i + 1)))?;
        ids.push(e);
    }
    SpanningTree::from_edges(g, &ids).map_err(|e| CliError::Rejected(format!("BadTree: {e}")))
}

fn run_config(eps: f64, seed: u64) -> Result<RunConfig, CliError> {
    RunConfig::new(eps).map(|c| c.with_seed(seed)).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<SolveReport, CliError> {
    let mut cfg = run_config(args.epsilon, args.seed)?;
    cfg.thresholds = PhaseThresholds { large_step: args.large_step_threshold, small_step: args.small_step_threshold };
    let g = load_graph(&args.input)?;
    let r = improved_mdst(&g, &cfg).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(path) = &args.emit_tree {
        write_file(path, &tree_to_text(&g, &r.tree))?;
    }
    if let (Some(path), Some(cert)) = (&args.emit_cert, &r.certificate) {
        write_file(path, &(cert.to_json() + "\n"))?;
    }
    let report = SolveReport::from_run(&g, &cfg, &r, !args.no_timing);
    let text = if args.json { report.to_json() } else { report.to_table() };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(report)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<usize, CliError> {
    let g = load_graph(&args.input)?;
    let t = parse_tree(&g, &read(&args.tree)?)?;
    let cert = LowerBoundCertificate::from_json(&read(&args.cert)?).map_err(|e| CliError::Input(e.to_string()))?;
    let bound = verify_certificate(&g, &t, &cert).map_err(|e| CliError::Rejected(format!("{e:?}")))?;
    writeln!(out, "verified bound {bound}").map_err(|e| CliError::Input(e.to_string()))?;
    Ok(bound)
}

pub fn cmd_exact(args: &ExactArgs, out: &mut dyn Write) -> Result<usize, CliError> {
    let g = load_graph(&args.input)?;
    let (d, _) = exact_mdst(&g).map_err(|e| match e {
        OracleError::TooLarge { .. } => CliError::Input(format!("TooLarge: {e}")),
        OracleError::BadParams(_) => CliError::Usage(e.to_string()),
    })?;
    writeln!(out, "{d}").map_err(|e| CliError::Input(e.to_string()))?;
    Ok(d)
}

pub fn gen_spec(args: &GenArgs) -> Result<GenSpec, CliError> {
    let kind = GenKind::from_name(&args.family).ok_or_else(|| {
        let names: Vec<_> = GenKind::ALL.iter().map(|k| k.name()).collect();
        CliError::Usage(format!("BadParams: unknown family {:?} (expected one of {})", args.family, names.join(", ")))
    })?;
    Ok(GenSpec { kind, n: args.n, p: args.p, extra: args.extra, seed: args.seed })
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = gen_spec(args)?;
    let gen = generate(&spec).map_err(|e| CliError::Usage(format!("BadParams: {e}")))?;
    let mut text = format!("c {}\n", gen.provenance);
    match args.format {
        OutFormat::Dimacs => text.push_str(&gen.graph.to_dimacs()),
        OutFormat::Edges => {
            for &(u, v) in gen.graph.edges() {
                let _ = writeln!(text, "{u} {v}");
            }
        }
    }
    match &args.output {
        Some(path) => write_file(path, &text),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string())),
    }
}

/// Random graph with the given average degree, as the bench ladder uses it.
pub fn ladder_graph(n: usize, avg_degree: f64, seed: u64) -> Result<Graph, CliError> {
    let p = (avg_degree / (n.max(2) - 1) as f64).min(1.0);
    generate(&GenSpec::gnp(n, p, seed)).map(|g| g.graph).map_err(|e| CliError::Usage(format!("BadParams: {e}")))
}

fn timed(g: &Graph, cfg: &RunConfig) -> Result<(f64, RunResult), CliError> {
    let start = Instant::now();
    let r = improved_mdst(g, cfg).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((start.elapsed().as_secs_f64() * 1e3, r))
}

fn row(g: &Graph, cfg: &RunConfig, wall_ms: f64, r: &RunResult) -> BenchRow {
    BenchRow { n: g.n(), m: g.m(), eps: cfg.eps_user, wall_ms, tree_degree: r.delta, degred_calls: r.stats.degred_calls }
}

/// Solves `g` `repeats` times and keeps the fastest wall time.
pub fn time_solve(g: &Graph, cfg: &RunConfig, repeats: usize) -> Result<BenchRow, CliError> {
    let (mut best, mut last) = timed(g, cfg)?;
    for _ in 1..repeats {
        drop(last);
        let (ms, r) = timed(g, cfg)?;
        best = best.min(ms);
        last = r;
    }
    Ok(row(g, cfg, best, &last))
}

/// Single-threaded ladders run the repeats round-robin over the points, so a
/// burst of outside load cannot spoil every sample of one point.
pub fn bench_rows(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    if args.min_exp > args.max_exp || args.max_exp > 30 {
        return Err(CliError::Usage(format!("bad ladder 2^{}..2^{}", args.min_exp, args.max_exp)));
    }
    let cfg = run_config(args.epsilon, args.seed)?;
    let exps: Vec<u32> = (args.min_exp..=args.max_exp).collect();
    let point = |e: u32| -> Result<BenchRow, CliError> {
        let g = ladder_graph(1 << e, args.avg_degree, args.seed)?;
        time_solve(&g, &cfg, args.repeats)
    };
    if args.jobs <= 1 {
        let graphs = exps
            .iter()
            .map(|&e| ladder_graph(1 << e, args.avg_degree, args.seed))
            .collect::<Result<Vec<_>, _>>()?;
        let mut best = vec![f64::INFINITY; graphs.len()];
        let mut rows = Vec::with_capacity(graphs.len());
        for rep in 0..args.repeats.max(1) {
            for (i, g) in graphs.iter().enumerate() {
                let (ms, r) = timed(g, &cfg)?;
                best[i] = best[i].min(ms);
                if rep == 0 {
                    rows.push(row(g, &cfg, ms, &r));
                }
            }
        }
        for (r, ms) in rows.iter_mut().zip(best) {
            r.wall_ms = ms;
        }
        return Ok(rows);
    }
    let mut rows: Vec<Option<Result<BenchRow, CliError>>> = (0..exps.len()).map(|_| None).collect();
    for chunk in exps.iter().zip(rows.iter_mut()).collect::<Vec<_>>().chunks_mut(args.jobs) {
        std::thread::scope(|s| {
            for (e, slot) in chunk.iter_mut() {
                let e = **e;
                let point = &point;
                s.spawn(move || **slot = Some(point(e)));
            }
        });
    }
    rows.into_iter().map(|r| r.expect("every point ran")).collect()
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<Vec<BenchRow>, CliError> {
    let rows = bench_rows(args)?;
    let mut text = format!("{BENCH_HEADER}\n");
    for r in &rows {
        text.push_str(&r.csv());
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(rows)
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out).map(drop),
        Command::Verify(a) => cmd_verify(a, out).map(drop),
        Command::Exact(a) => cmd_exact(a, out).map(drop),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Bench(a) => cmd_bench(a, out).map(drop),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
