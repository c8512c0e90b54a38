use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::backend::{Mode, SolverConfig, Verdict};
use crate::error::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone)]
pub struct BenchTask {
    pub name: String,
    pub source: PathBuf,
    /// Program family, the row group of the rendered table.
    pub family: String,
    pub expect: Verdict,
    /// `cata_abs` bodies replacing those of the source when non-empty.
    pub abstractions: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct BenchManifest {
    pub tasks: Vec<BenchTask>,
    pub solvers: Vec<SolverConfig>,
    pub timeout: Duration,
    pub modes: Vec<Mode>,
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("manifest line {line}: {msg}"))
}

impl BenchManifest {
    pub fn load(path: &Path) -> Result<BenchManifest> {
        let text = std::fs::read_to_string(path)?;
        BenchManifest::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses the line-oriented format; relative source paths resolve against `base`.
    /// Solver templates are kept as text until all lines are read, so `timeout`
    /// may come after them.
    pub fn parse(text: &str, base: &Path) -> Result<BenchManifest> {
        let mut timeout = DEFAULT_TIMEOUT;
        let mut modes = Mode::ALL.to_vec();
        let mut solvers: Vec<(usize, String, String)> = Vec::new();
        let mut tasks: Vec<BenchTask> = Vec::new();
        let mut expect_seen: Vec<bool> = Vec::new();
        let mut names = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let indented = line.starts_with(char::is_whitespace);
            let line = line.trim();
            if indented {
                let task = tasks.last_mut().ok_or_else(|| err(n, "indented line outside a task"))?;
                let (k, v) = line.split_once('=').ok_or_else(|| err(n, "expected `key = value`"))?;
                let v = v.trim();
                match k.trim() {
                    "source" => task.source = base.join(v),
                    "family" => task.family = v.to_string(),
                    "expect" => {
                        task.expect = match Verdict::parse(v) {
                            Some(x @ (Verdict::Sat | Verdict::Unsat | Verdict::Unknown)) => x,
                            _ => return Err(err(n, format!("expected verdict must be sat, unsat, or unknown, not `{v}`"))),
                        };
                        *expect_seen.last_mut().expect("task") = true;
                    }
                    "abstraction" => task.abstractions.push(v.trim_end_matches('.').to_string()),
                    other => return Err(err(n, format!("unknown task key `{other}`"))),
                }
                continue;
            }
            if let Some(name) = line.strip_prefix("task ") {
                let name = name.trim().to_string();
                if !names.insert(name.clone()) {
                    return Err(err(n, format!("task `{name}` defined twice")));
                }
                tasks.push(BenchTask {
                    source: PathBuf::new(),
                    family: name.clone(),
                    name,
                    expect: Verdict::Unknown,
                    abstractions: Vec::new(),
                });
                expect_seen.push(false);
                continue;
            }
            if let Some(rest) = line.strip_prefix("solver ") {
                let (name, cmd) = rest.split_once('=').ok_or_else(|| err(n, "expected `solver NAME = COMMAND`"))?;
                solvers.push((n, name.trim().to_string(), cmd.trim().to_string()));
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| err(n, format!("cannot read `{line}`")))?;
            let v = v.trim();
            match k.trim() {
                "timeout" => {
                    let secs: f64 = v.parse().map_err(|_| err(n, format!("bad timeout `{v}`")))?;
                    if secs.is_nan() || secs <= 0.0 {
                        return Err(err(n, "timeout must be positive"));
                    }
                    timeout = Duration::from_secs_f64(secs);
                }
                "modes" => {
                    modes = v
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(|s| Mode::parse(s).ok_or_else(|| err(n, format!("unknown mode `{s}`"))))
                        .collect::<Result<_>>()?;
                }
                other => return Err(err(n, format!("unknown key `{other}`"))),
            }
        }
        for (t, seen) in tasks.iter().zip(&expect_seen) {
            if t.source.as_os_str().is_empty() {
                return Err(Error::Config(format!("task `{}` has no source", t.name)));
            }
            if !seen {
                return Err(Error::Config(format!("task `{}` has no expected verdict", t.name)));
            }
        }
        let solvers = solvers
            .into_iter()
            .map(|(n, name, cmd)| SolverConfig::from_template(&name, &cmd, timeout).map_err(|e| err(n, e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(BenchManifest { tasks, solvers, timeout, modes })
    }
}

/// Source text with its abstraction directives replaced by `abstractions`.
pub fn with_abstractions(source: &str, abstractions: &[String]) -> String {
    if abstractions.is_empty() {
        return source.to_string();
    }
    let mut out: String = source.lines().filter(|l| !l.trim_start().starts_with(":- cata_abs")).map(|l| format!("{l}\n")).collect();
    for a in abstractions {
        out.push_str(&format!(":- cata_abs {a}.\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "
# desk run
timeout = 5
modes = src, wwo
solver fake = sh -c 'echo sat' {file}

task double
  source = double.chc
  expect = sat
  family = double
task double_unsat
  source = double_unsat.chc
  expect = unsat
  abstraction = list(int) ==> listcount(X, L, N)
";

    #[test]
    fn parses_blocks() {
        let m = BenchManifest::parse(TEXT, Path::new("/b")).unwrap();
        assert_eq!(m.timeout, Duration::from_secs(5));
        assert_eq!(m.modes, vec![Mode::Src, Mode::Wwo]);
        assert_eq!(m.solvers.len(), 1);
        assert_eq!(m.solvers[0].timeout, Duration::from_secs(5));
        assert_eq!(m.tasks[0].source, Path::new("/b/double.chc"));
        assert_eq!(m.tasks[1].family, "double_unsat");
        assert_eq!(m.tasks[1].expect, Verdict::Unsat);
        assert_eq!(m.tasks[1].abstractions, vec!["list(int) ==> listcount(X, L, N)"]);
    }

    #[test]
    fn rejects_duplicates_and_missing_verdicts() {
        assert!(
            BenchManifest::parse("task a\n  source = a\n  expect = sat\ntask a\n  source = a\n  expect = sat\n", Path::new(".")).is_err()
        );
        assert!(BenchManifest::parse("task a\n  source = a\n", Path::new(".")).is_err());
        assert!(BenchManifest::parse("task a\n  source = a\n  expect = maybe\n", Path::new(".")).is_err());
        assert!(BenchManifest::parse("timeout = 0\n", Path::new(".")).is_err());
        assert!(BenchManifest::parse("  source = a\n", Path::new(".")).is_err());
    }

    #[test]
    fn abstraction_override_replaces_directives() {
        let src = ":- cata size(adt:list(int), out:int).\n:- cata_abs list(int) ==> size(L, N).\np([]).\n";
        let out = with_abstractions(src, &["list(int) ==> size(L, M)".into()]);
        assert_eq!(out, ":- cata size(adt:list(int), out:int).\np([]).\n:- cata_abs list(int) ==> size(L, M).\n");
    }
}
