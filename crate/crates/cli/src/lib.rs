//! The `farcheck` command line: argument definitions and the commands
//! behind them. Commands write to caller-supplied streams and return the
//! process exit code, so tests can drive them without spawning a process.

pub mod corpus;
pub mod diff;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use farcheck_core::engine::{export_dot, Outcome};
use farcheck_core::oracles::{backward_reach, explicit_reach, replay_trace, BackwardConfig, DEFAULT_STATE_LIMIT};
use farcheck_core::{check, load, Config, CoreSystem, QueueOrder, Solver, Trace, Verdict, VerdictKind};

pub mod exit {
    pub const SAFE: i32 = 0;
    pub const UNSAFE: i32 = 10;
    pub const INCONCLUSIVE: i32 = 20;
    pub const USAGE: i32 = 2;
    pub const INCONSISTENT: i32 = 3;
    /// `replay`: the trace runs but never reaches an unsafe state.
    pub const NOT_REACHED: i32 = 1;
}

pub fn verdict_code(kind: VerdictKind) -> i32 {
    match kind {
        VerdictKind::Safe => exit::SAFE,
        VerdictKind::Unsafe => exit::UNSAFE,
        VerdictKind::Inconclusive => exit::INCONCLUSIVE,
    }
}

#[derive(Parser, Debug)]
#[command(name = "farcheck", version, about = "Parameterized safety checking of array-based systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check one model.
    Check(CheckArgs),
    /// Run every model of a directory through all engines.
    Corpus(CorpusArgs),
    /// Replay a trace file on the explicit-state semantics.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Far,
    Backward,
    Explicit,
    Diff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Procs,
    Fifo,
}

impl From<Order> for QueueOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Procs => QueueOrder::Procs,
            Order::Fifo => QueueOrder::Fifo,
        }
    }
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "far")]
    pub engine: Engine,
    /// Instance size; required by (and only accepted with) `--engine explicit`.
    #[arg(long)]
    pub procs: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: u64,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long, value_enum, default_value = "procs")]
    pub queue_order: Order,
    /// Write the final unwinding graph in DOT format.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Leave the sink vertex and its edges out of the DOT output.
    #[arg(long)]
    pub hide_sink: bool,
    /// Write engine counters as JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Write the counterexample of an unsafe verdict.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write every solver query as one JSON object per line.
    #[arg(long)]
    pub dump_queries: Option<PathBuf>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long, default_value = "models")]
    pub dir: PathBuf,
    /// Add wall-clock columns to the table.
    #[arg(long)]
    pub timings: bool,
    /// Write `<model>.stats.json` and `<model>.dot` for each model here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub file: PathBuf,
    pub trace: PathBuf,
    /// Instance size; defaults to the trace header.
    #[arg(long)]
    pub procs: Option<usize>,
}

/// Parses argv and runs the command. Usage errors are reported on `err`.
pub fn main_with(argv: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::SAFE };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    run(cli, out, err)
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let res = match cli.command {
        Command::Check(a) => run_check(&a, out),
        Command::Corpus(a) => corpus::run_corpus(&a, out),
        Command::Replay(a) => run_replay(&a, out),
    };
    match res {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            exit::USAGE
        }
    }
}

pub fn load_model(path: &Path) -> Result<CoreSystem, String> {
    let src = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    load(&src, &name).map_err(|e| format!("{}:{e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>, String> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    let mut f = create(path)?;
    f.write_all(contents.as_bytes())
        .and_then(|_| f.flush())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn io(e: std::io::Error) -> String {
    format!("output error: {e}")
}

pub fn engine_config(a: &CheckArgs) -> Result<Config, String> {
    let timeout = match a.timeout {
        Some(t) if !(t.is_finite() && t >= 0.0) => return Err(format!("invalid timeout {t}")),
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    Ok(Config {
        max_steps: a.max_steps,
        timeout,
        queue_order: a.queue_order.into(),
        ..Config::default()
    })
}

pub fn stats_json(outcome: &Outcome) -> String {
    serde_json::to_string_pretty(&outcome.stats).expect("stats serialize") + "\n"
}

fn run_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32, String> {
    match (a.engine, a.procs) {
        (Engine::Explicit, None) => return Err("--engine explicit needs --procs".into()),
        (Engine::Explicit, Some(_)) => {}
        (_, Some(_)) => return Err("--procs is only accepted with --engine explicit".into()),
        _ => {}
    }
    if !matches!(a.engine, Engine::Far | Engine::Diff) && (a.dot.is_some() || a.stats.is_some()) {
        return Err("--dot and --stats need the far or diff engine".into());
    }
    let sys = load_model(&a.file)?;
    let config = engine_config(a)?;
    let mut solver = Solver::new(&sys.sig);
    if let Some(p) = &a.dump_queries {
        solver = solver.with_dump(Box::new(create(p)?));
    }

    let (verdict, code) = match a.engine {
        Engine::Far => {
            let outcome = check(&sys, &solver, &config);
            writeln!(out, "{}", outcome.verdict.token()).map_err(io)?;
            write_far_artifacts(a, &sys, &outcome)?;
            if a.verbose > 0 {
                let s = &outcome.stats;
                writeln!(
                    out,
                    "vertices {} edges {} covers {} refines {} bad propagations {} solver calls {} time {} ms",
                    s.vertices_created, s.edges, s.covers, s.refines, s.bad_propagations, s.solver_calls, s.elapsed_ms
                )
                .map_err(io)?;
            }
            let code = verdict_code(outcome.verdict.kind());
            (outcome.verdict, code)
        }
        Engine::Backward => {
            let bc = BackwardConfig {
                max_steps: config.max_steps,
                timeout: config.timeout,
                ..BackwardConfig::default()
            };
            let report = backward_reach(&sys, &solver, &bc);
            writeln!(out, "{}", report.verdict.token()).map_err(io)?;
            if a.verbose > 0 {
                writeln!(out, "visited {} steps {}", report.visited, report.steps).map_err(io)?;
            }
            let code = verdict_code(report.verdict.kind());
            (report.verdict, code)
        }
        Engine::Explicit => {
            let n = a.procs.expect("checked above");
            let report = explicit_reach(&sys, n, DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?;
            writeln!(out, "{}", report.verdict.token()).map_err(io)?;
            if a.verbose > 0 {
                writeln!(out, "states {}", report.states).map_err(io)?;
            }
            let code = verdict_code(report.verdict.kind());
            (report.verdict, code)
        }
        Engine::Diff => {
            let (report, outcome) = diff::run_diff(&sys, &solver, &config);
            write!(out, "{}", report.render()).map_err(io)?;
            write_far_artifacts(a, &sys, &outcome)?;
            (outcome.verdict, report.exit_code())
        }
    };

    if let Verdict::Unsafe { trace } = &verdict {
        if a.engine != Engine::Diff {
            write_trace(out, trace)?;
        }
        if let Some(p) = &a.trace {
            write_file(p, &trace.to_text())?;
        }
    }
    if a.verbose > 0 {
        if let Verdict::Safe { invariant } = &verdict {
            writeln!(out, "invariant:").map_err(io)?;
            for w in invariant {
                writeln!(out, "  {}", w.display(&sys.sig)).map_err(io)?;
            }
        }
    }
    Ok(code)
}

fn write_far_artifacts(a: &CheckArgs, sys: &CoreSystem, outcome: &Outcome) -> Result<(), String> {
    if let Some(p) = &a.dot {
        write_file(p, &export_dot(sys, &outcome.graph, a.hide_sink))?;
    }
    if let Some(p) = &a.stats {
        write_file(p, &stats_json(outcome))?;
    }
    Ok(())
}

fn write_trace(out: &mut dyn Write, trace: &Trace) -> Result<(), String> {
    writeln!(out, "trace ({} procs, {} steps):", trace.nprocs, trace.len()).map_err(io)?;
    for s in &trace.steps {
        writeln!(out, "  {s}").map_err(io)?;
    }
    Ok(())
}

fn run_replay(a: &ReplayArgs, out: &mut dyn Write) -> Result<i32, String> {
    let sys = load_model(&a.file)?;
    let text = std::fs::read_to_string(&a.trace).map_err(|e| format!("cannot read {}: {e}", a.trace.display()))?;
    let trace = Trace::parse(&text).map_err(|e| format!("{}: {e}", a.trace.display()))?;
    let n = a.procs.unwrap_or(trace.nprocs);
    match replay_trace(&sys, &trace, n) {
        Ok(true) => {
            writeln!(out, "REACHES UNSAFE").map_err(io)?;
            Ok(exit::SAFE)
        }
        Ok(false) => {
            writeln!(out, "DOES NOT REACH UNSAFE").map_err(io)?;
            Ok(exit::NOT_REACHED)
        }
        Err(e) => Err(e.to_string()),
    }
}
