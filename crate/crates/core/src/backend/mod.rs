//! SMT-LIB HORN emission and external solver driving.

mod mangle;
mod smtlib;
mod solver;

use std::path::{Path, PathBuf};

pub use mangle::Mangling;
pub use smtlib::{emit_smtlib, SmtScript};
pub use solver::{classify_outcome, run_solver, Mode, Outcome, SolverConfig, SolverResult, Verdict, FILE_PLACEHOLDER, SOLVER_ENV};

use crate::error::Result;
use crate::ir::{Clause, Program};
use crate::transform::TransformOutput;

/// The clause set of `mode`: the source program and queries for `src`, otherwise
/// a transformed set.
pub fn clauses_for_mode(mode: Mode, src: &Program, out: &TransformOutput) -> Vec<Clause> {
    match mode {
        Mode::Src => src.clauses.iter().chain(&src.queries).cloned().collect(),
        Mode::W => out.t_w.clone(),
        Mode::Wo => out.t_wo.clone(),
        Mode::Wwo => out.t_wwo.clone(),
    }
}

/// Script for one mode.
pub fn script_for_mode(mode: Mode, src: &Program, out: &TransformOutput) -> Result<SmtScript> {
    emit_smtlib(&clauses_for_mode(mode, src, out), &out.program)
}

/// Writes `<stem>.<mode>.smt2` for every mode and `<stem>.names.tsv` with the
/// union of their renamings. Returns the script paths in mode order.
pub fn write_scripts(dir: &Path, stem: &str, modes: &[Mode], src: &Program, out: &TransformOutput) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut names = Mangling::new();
    let mut paths = Vec::new();
    for &m in modes {
        let s = script_for_mode(m, src, out)?;
        let p = dir.join(format!("{stem}.{m}.smt2"));
        std::fs::write(&p, &s.text)?;
        names.extend(&s.names);
        paths.push(p);
    }
    std::fs::write(dir.join(format!("{stem}.names.tsv")), names.to_tsv())?;
    Ok(paths)
}
