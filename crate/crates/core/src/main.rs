use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use catachc::backend::{classify_outcome, run_solver, write_scripts, Mode, SolverConfig, Verdict, SOLVER_ENV};
use catachc::bench::{run_bench, BenchManifest};
use catachc::cata::print_spec;
use catachc::error::{Error, Result};
use catachc::frontend::print_clauses;
use catachc::oracle::{compare_transformation, Limits, Universe};
use catachc::pipeline::{run, PipelineOptions, Run};
use catachc::transform::TransformOptions;

/// Exit status of `transform` and `verify` when the input cannot be processed.
const EXIT_ERROR: u8 = 3;
/// Exit status of `transform --oracle-check` when the bounded comparison fails.
const EXIT_ORACLE: u8 = 4;

#[derive(Parser)]
#[command(name = "cata-chc", version, about = "Remove catamorphisms from Horn clauses over algebraic data types")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    W,
    Wo,
    Wwo,
    All,
}

impl Emit {
    fn modes(self) -> Vec<Mode> {
        match self {
            Emit::W => vec![Mode::W],
            Emit::Wo => vec![Mode::Wo],
            Emit::Wwo => vec![Mode::Wwo],
            Emit::All => vec![Mode::Wwo, Mode::W, Mode::Wo],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Src,
    Wwo,
    W,
    Wo,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Src => Mode::Src,
            ModeArg::Wwo => Mode::Wwo,
            ModeArg::W => Mode::W,
            ModeArg::Wo => Mode::Wo,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Transform a program and write or print the resulting clause sets.
    Transform {
        file: PathBuf,
        /// Clause sets to produce.
        #[arg(long, value_enum, default_value = "all")]
        emit: Emit,
        /// Directory for `<stem>.<mode>.smt2`, `<stem>.<mode>.chc`, and
        /// `<stem>.names.tsv`; without it the readable clause sets go to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the generated abstraction specs.
        #[arg(long)]
        emit_specs: bool,
        /// Write the transformation trace to FILE.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Name new predicates after the predicate they define.
        #[arg(long)]
        readable_names: bool,
        /// Compare bounded least models of the source and the result.
        #[arg(long)]
        oracle_check: bool,
        /// Bound on ADT value size for `--oracle-check`.
        #[arg(long, default_value_t = 2)]
        oracle_size: usize,
        /// Check that every catamorphism is functional and total on small values.
        #[arg(long)]
        check_catas: bool,
    },
    /// Transform a program and run a HORN solver on one clause set.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "wwo")]
        mode: ModeArg,
        /// Solver command template; `{file}` is replaced by the script path.
        /// Defaults to the CATACHC_SOLVER environment variable.
        #[arg(long)]
        solver: Option<String>,
        /// Seconds before the solver is killed.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
    },
    /// Run a benchmark manifest and print the verdict table.
    Bench {
        manifest: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the per-run TSV report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error[{}]: {e}", e.kind());
    ExitCode::from(EXIT_ERROR)
}

fn load(file: &Path, readable_names: bool, check_catas: bool) -> Result<Run> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Config(format!("{}: {e}", file.display())))?;
    let opts =
        PipelineOptions { transform: TransformOptions { readable_names }, functionality_check: check_catas.then(|| (3, vec![-1, 0, 1])) };
    run(&text, &opts)
}

fn stem(file: &Path) -> String {
    file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

#[allow(clippy::too_many_arguments)]
fn transform(
    file: &Path,
    emit: Emit,
    out: Option<&Path>,
    emit_specs: bool,
    trace: Option<&Path>,
    readable_names: bool,
    oracle: Option<usize>,
    check_catas: bool,
) -> Result<u8> {
    let r = load(file, readable_names, check_catas)?;
    for w in &r.prepared.program.warnings {
        eprintln!("warning: {w}");
    }
    let modes = emit.modes();
    if emit_specs {
        for s in r.prepared.specs.values() {
            println!("{}", print_spec(s));
        }
    }
    if let Some(t) = trace {
        std::fs::write(t, r.output.trace_text())?;
    }
    let set = |m: Mode| match m {
        Mode::W => &r.output.t_w,
        Mode::Wo => &r.output.t_wo,
        _ => &r.output.t_wwo,
    };
    match out {
        Some(dir) => {
            let s = stem(file);
            write_scripts(dir, &s, &modes, &r.prepared.program, &r.output)?;
            for &m in &modes {
                std::fs::write(dir.join(format!("{s}.{m}.chc")), print_clauses(set(m), &r.output.program))?;
            }
        }
        None => {
            for &m in &modes {
                println!("% {m}");
                print!("{}", print_clauses(set(m), &r.output.program));
            }
        }
    }
    eprintln!(
        "{}: {} definitions, {} iterations, w {} / wo {} / wwo {} clauses, {:.3}s",
        file.display(),
        r.output.defs.len(),
        r.output.iterations,
        r.output.t_w.len(),
        r.output.t_wo.len(),
        r.output.t_wwo.len(),
        r.elapsed.as_secs_f64()
    );
    if let Some(size) = oracle {
        let u = Universe::new(&r.output.program.datatypes, &[-1, 0, 1], size);
        let c = compare_transformation(&r.output, &u, Limits::default())?;
        eprint!("{c}");
        if !c.is_ok() {
            eprintln!("oracle check failed");
            return Ok(EXIT_ORACLE);
        }
        eprintln!("oracle check passed");
    }
    Ok(0)
}

fn verify(file: &Path, mode: Mode, solver: Option<&str>, timeout: f64) -> Result<u8> {
    if !(timeout.is_finite() && timeout > 0.0) {
        return Err(Error::Config("timeout must be positive".into()));
    }
    let timeout = Duration::from_secs_f64(timeout);
    let cfg = match solver {
        Some(t) => SolverConfig::from_template("solver", t, timeout)?,
        None => SolverConfig::from_env(timeout).ok_or_else(|| Error::Config(format!("no solver: pass --solver or set {SOLVER_ENV}")))??,
    };
    cfg.resolve()?;
    let r = load(file, false, false)?;
    let dir = tempfile::tempdir()?;
    let paths = write_scripts(dir.path(), &stem(file), &[mode], &r.prepared.program, &r.output)?;
    let res = run_solver(&paths[0], &cfg);
    if res.verdict == Verdict::Error {
        return Err(Error::Config(format!("solver failed: {}", res.excerpt.trim())));
    }
    let o = classify_outcome(mode, &res);
    println!("{o}");
    eprintln!("{}: {mode} {o} in {:.3}s", file.display(), res.wall.as_secs_f64());
    Ok(match (o.verdict, o.unreliable) {
        (Verdict::Sat, _) => 0,
        (Verdict::Unsat, false) => 1,
        _ => 2,
    })
}

fn bench(manifest: &Path, jobs: usize, report: Option<&Path>) -> Result<u8> {
    let m = BenchManifest::load(manifest)?;
    let r = run_bench(&m, jobs);
    if let Some(p) = report {
        std::fs::write(p, r.to_tsv())?;
    }
    print!("{}", r.render_table());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Transform { file, emit, out, emit_specs, trace, readable_names, oracle_check, oracle_size, check_catas } => transform(
            &file,
            emit,
            out.as_deref(),
            emit_specs,
            trace.as_deref(),
            readable_names,
            oracle_check.then_some(oracle_size),
            check_catas,
        ),
        Cmd::Verify { file, mode, solver, timeout } => verify(&file, mode.into(), solver.as_deref(), timeout),
        Cmd::Bench { manifest, jobs, report } => bench(&manifest, jobs, report.as_deref()),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(&e),
    }
}
