//! End-to-end driver: source text to transformed clause sets.

use std::time::{Duration, Instant};

use crate::cata::{build_abstraction_specs, check_functionality_bounded, validate_all, CataDef, FunctionalityReport, SpecMap};
use crate::error::{Error, Result};
use crate::frontend::load_program;
use crate::ir::Program;
use crate::transform::{cata_abs, TransformOptions, TransformOutput};

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    pub transform: TransformOptions,
    /// Size bound and integer domain for the bounded functionality and totality
    /// check of every catamorphism; `None` skips the check.
    pub functionality_check: Option<(usize, Vec<i64>)>,
}

/// A checked program with its catamorphisms and per-predicate specs.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub program: Program,
    pub catas: Vec<CataDef>,
    pub specs: SpecMap,
}

/// Parses, sort-checks, validates the catamorphisms, and generates specs.
pub fn prepare(text: &str, opts: &PipelineOptions) -> Result<Prepared> {
    let mut program = load_program(text)?;
    let catas = validate_all(&program)?;
    if let Some((size, domain)) = &opts.functionality_check {
        for cd in &catas {
            match check_functionality_bounded(&program, cd, *size, domain) {
                FunctionalityReport::Inconclusive(m) => {
                    program.warnings.push(format!("functionality of `{}` not established: {m}", cd.name))
                }
                r if r.is_ok() => {}
                r => return Err(Error::NotFunctional { name: cd.name.clone(), witness: r.to_string() }),
            }
        }
    }
    let specs = build_abstraction_specs(&program)?;
    Ok(Prepared { program, catas, specs })
}

/// Transformation result with the time spent in all phases.
#[derive(Debug, Clone)]
pub struct Run {
    pub prepared: Prepared,
    pub output: TransformOutput,
    pub elapsed: Duration,
}

/// Runs the whole pipeline on source text.
pub fn run(text: &str, opts: &PipelineOptions) -> Result<Run> {
    let start = Instant::now();
    let prepared = prepare(text, opts)?;
    let output = cata_abs(&prepared.program, &prepared.specs, opts.transform)?;
    Ok(Run { prepared, output, elapsed: start.elapsed() })
}
