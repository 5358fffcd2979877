//! `farcheck corpus`: every model of a directory through every engine.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use farcheck_core::engine::{export_dot, Stats};
use farcheck_core::oracles::{backward_reach, BackwardConfig};
use farcheck_core::{check, Config, Solver, Trace, Verdict};

use crate::diff::{explicit_results, DiffReport, ExplicitResult};
use crate::{exit, load_model, write_file, CorpusArgs};

pub struct Row {
    pub model: String,
    pub report: DiffReport,
    pub stats: Stats,
    pub dot: String,
    /// The FAR counterexample, if any.
    pub trace: Option<Trace>,
    pub far_ms: u128,
    pub backward_ms: u128,
}

/// Model files of `dir`, sorted by name.
pub fn model_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries = std::fs::read_dir(dir).map_err(|e| format!("cannot read {}: {e}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "fcub"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn run_model(path: &Path, config: &Config) -> Result<Row, String> {
    let sys = load_model(path)?;
    let solver = Solver::new(&sys.sig);

    let t = Instant::now();
    let outcome = check(&sys, &solver, config);
    let far_ms = t.elapsed().as_millis();

    let t = Instant::now();
    let bc = BackwardConfig {
        max_steps: config.max_steps,
        timeout: config.timeout,
        ..BackwardConfig::default()
    };
    let backward = backward_reach(&sys, &solver, &bc);
    let backward_ms = t.elapsed().as_millis();

    let trace = match &outcome.verdict {
        Verdict::Unsafe { trace } => Some(trace.clone()),
        _ => None,
    };
    Ok(Row {
        model: sys.name.clone(),
        report: DiffReport {
            far: (&outcome.verdict).into(),
            backward: (&backward.verdict).into(),
            explicit: explicit_results(&sys),
        },
        dot: export_dot(&sys, &outcome.graph, true),
        stats: outcome.stats,
        trace,
        far_ms,
        backward_ms,
    })
}

pub fn run_all(dir: &Path, config: &Config) -> Result<Vec<Row>, String> {
    model_files(dir)?.iter().map(|p| run_model(p, config)).collect()
}

fn cell(r: &ExplicitResult) -> String {
    match r {
        ExplicitResult::Verdict { kind, .. } => kind.to_string(),
        ExplicitResult::Skipped(_) => "-".into(),
    }
}

pub fn render_table(rows: &[Row], timings: bool) -> String {
    let mut header = vec!["model".to_string(), "far".into(), "backward".into()];
    if let Some(first) = rows.first() {
        header.extend(first.report.explicit.iter().map(|(n, _)| format!("explicit({n})")));
    }
    header.push("diff".into());
    if timings {
        header.extend(["far_ms".to_string(), "backward_ms".into()]);
    }
    let mut table = vec![header];
    for r in rows {
        let mut line = vec![
            r.model.clone(),
            r.report.far.kind.to_string(),
            r.report.backward.kind.to_string(),
        ];
        line.extend(r.report.explicit.iter().map(|(_, e)| cell(e)));
        line.push(if r.report.is_consistent() { "CONSISTENT" } else { "INCONSISTENT" }.into());
        if timings {
            line.extend([r.far_ms.to_string(), r.backward_ms.to_string()]);
        }
        table.push(line);
    }
    let ncols = table[0].len();
    let widths: Vec<usize> = (0..ncols)
        .map(|c| table.iter().map(|l| l.get(c).map_or(0, |s| s.chars().count())).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for line in &table {
        let cells: Vec<String> = line
            .iter()
            .enumerate()
            .map(|(c, v)| format!("{v:<w$}", w = widths[c]))
            .collect();
        let _ = writeln!(s, "{}", cells.join("  ").trim_end());
    }
    s
}

/// Stats JSON without the wall-clock field, for byte comparisons.
pub fn stable_stats(stats: &Stats) -> String {
    let mut v = serde_json::to_value(stats).expect("stats serialize");
    if let Some(map) = v.as_object_mut() {
        map.remove("elapsed_ms");
    }
    v.to_string()
}

pub(crate) fn run_corpus(a: &CorpusArgs, out: &mut dyn Write) -> Result<i32, String> {
    let rows = run_all(&a.dir, &Config::default())?;
    if rows.is_empty() {
        return Err(format!("no .fcub models in {}", a.dir.display()));
    }
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        for r in &rows {
            let stats = serde_json::to_string_pretty(&r.stats).expect("stats serialize") + "\n";
            write_file(&dir.join(format!("{}.stats.json", r.model)), &stats)?;
            write_file(&dir.join(format!("{}.dot", r.model)), &r.dot)?;
        }
    }
    write!(out, "{}", render_table(&rows, a.timings)).map_err(crate::io)?;
    Ok(if rows.iter().all(|r| r.report.is_consistent()) {
        exit::SAFE
    } else {
        exit::INCONSISTENT
    })
}
