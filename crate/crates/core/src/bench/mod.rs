//! Benchmark harness: runs every task of a manifest in every mode against every
//! solver and tabulates the verdicts.

mod manifest;
mod report;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

pub use manifest::{with_abstractions, BenchManifest, BenchTask, DEFAULT_TIMEOUT};
pub use report::{BenchReport, BenchRow, Counts, TSV_HEADER};

use crate::backend::{classify_outcome, write_scripts, Mode, SolverConfig, SolverResult, Verdict};
use crate::pipeline::{run, PipelineOptions};

/// Name of the placeholder column used when no solver is configured.
pub const NO_SOLVER: &str = "none";

fn error_row(task: &BenchTask, solver: &str, mode: Mode, transform: Duration, note: String) -> BenchRow {
    let r = SolverResult { verdict: Verdict::Error, wall: Duration::ZERO, excerpt: String::new() };
    BenchRow {
        task: task.name.clone(),
        family: task.family.clone(),
        solver: solver.to_string(),
        mode,
        expect: task.expect,
        outcome: classify_outcome(mode, &r),
        wall: Duration::ZERO,
        transform,
        note,
    }
}

/// Runs one task: transformation once, then each mode against each solver.
fn run_task(task: &BenchTask, solvers: &[SolverConfig], modes: &[Mode]) -> (Vec<BenchRow>, Option<String>) {
    let names: Vec<String> =
        if solvers.is_empty() { vec![NO_SOLVER.to_string()] } else { solvers.iter().map(|s| s.name.clone()).collect() };
    let all_fail = |transform: Duration, note: String, modes: &[Mode]| -> Vec<BenchRow> {
        modes.iter().flat_map(|&m| names.iter().map(move |s| (m, s))).map(|(m, s)| error_row(task, s, m, transform, note.clone())).collect()
    };
    let text = match std::fs::read_to_string(&task.source) {
        Ok(t) => with_abstractions(&t, &task.abstractions),
        Err(e) => {
            let msg = format!("{}: {e}", task.source.display());
            return (all_fail(Duration::ZERO, msg.clone(), modes), Some(msg));
        }
    };
    let start = Instant::now();
    let r = match run(&text, &PipelineOptions::default()) {
        Ok(r) => r,
        Err(e) => return (all_fail(start.elapsed(), e.to_string(), modes), Some(e.to_string())),
    };
    let transform = r.elapsed;
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return (all_fail(transform, e.to_string(), modes), Some(e.to_string())),
    };
    let paths = match write_scripts(dir.path(), &task.name, modes, &r.prepared.program, &r.output) {
        Ok(p) => p,
        Err(e) => return (all_fail(transform, e.to_string(), modes), Some(e.to_string())),
    };
    let mut rows = Vec::new();
    for (&m, path) in modes.iter().zip(&paths) {
        let t = if m == Mode::Src { Duration::ZERO } else { transform };
        if solvers.is_empty() {
            rows.push(error_row(task, NO_SOLVER, m, t, "no solver configured".into()));
            continue;
        }
        for s in solvers {
            let r = run_solver_checked(path, s);
            let note = if r.verdict == Verdict::Error { r.excerpt.lines().next().unwrap_or("").to_string() } else { String::new() };
            rows.push(BenchRow {
                task: task.name.clone(),
                family: task.family.clone(),
                solver: s.name.clone(),
                mode: m,
                expect: task.expect,
                outcome: classify_outcome(m, &r),
                wall: r.wall,
                transform: t,
                note,
            });
        }
    }
    (rows, None)
}

fn run_solver_checked(path: &std::path::Path, s: &SolverConfig) -> SolverResult {
    if let Err(e) = s.resolve() {
        return SolverResult { verdict: Verdict::Error, wall: Duration::ZERO, excerpt: e.to_string() };
    }
    crate::backend::run_solver(path, s)
}

/// Runs the manifest with up to `jobs` tasks at a time. Without solvers in the
/// manifest the `CATACHC_SOLVER` template is used if set; otherwise every run is
/// reported as an error.
pub fn run_bench(m: &BenchManifest, jobs: usize) -> BenchReport {
    let mut solvers = m.solvers.clone();
    if solvers.is_empty() {
        if let Some(Ok(s)) = SolverConfig::from_env(m.timeout) {
            solvers.push(s);
        }
    }
    let next = AtomicUsize::new(0);
    let rows = Mutex::new(Vec::new());
    let failures = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, m.tasks.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(task) = m.tasks.get(i) else { break };
                let (r, f) = run_task(task, &solvers, &m.modes);
                rows.lock().expect("rows").extend(r);
                if let Some(f) = f {
                    failures.lock().expect("failures").push((task.name.clone(), f));
                }
            });
        }
    });
    let names = if solvers.is_empty() { vec![NO_SOLVER.to_string()] } else { solvers.iter().map(|s| s.name.clone()).collect() };
    BenchReport::new(rows.into_inner().expect("rows"), names, m.modes.clone(), failures.into_inner().expect("failures"))
}
