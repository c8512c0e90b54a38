//! Bounded semantic agreement between every shipped benchmark and its
//! transformation, checked with the ground evaluator.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use catachc::oracle::{compare_transformation, Comparison, Limits, Universe};
use catachc::pipeline::{run, PipelineOptions};

fn benchmark_files() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "chc"))
        .filter(|p| std::fs::read_to_string(p).unwrap().lines().any(|l| l.starts_with("false")))
        .collect();
    files.sort();
    files
}

fn comparisons() -> &'static [(String, Comparison)] {
    static CACHE: OnceLock<Vec<(String, Comparison)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        benchmark_files()
            .iter()
            .map(|f| {
                let r = run(&std::fs::read_to_string(f).unwrap(), &PipelineOptions::default()).unwrap();
                let u = Universe::new(&r.output.program.datatypes, &[-1, 0, 1], 3);
                let c = compare_transformation(&r.output, &u, Limits::default()).unwrap();
                (f.file_stem().unwrap().to_string_lossy().to_string(), c)
            })
            .collect()
    })
}

#[test]
fn every_benchmark_agrees_with_its_transformation_at_size_3() {
    let all = comparisons();
    assert!(all.len() >= 12, "benchmark corpus missing");
    let mut failures = Vec::new();
    for (name, c) in all {
        assert!(c.definitions > 0 && c.atoms > 0, "{name}: nothing compared");
        if !c.is_ok() {
            failures.push(format!("{name}:\n{c}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn companions_are_violated_and_originals_are_not() {
    for (name, c) in comparisons() {
        let violated = c.queries.iter().any(|q| q[0]);
        assert_eq!(violated, name.ends_with("_unsat"), "{name}");
    }
}
