use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Environment variable holding the default solver command template.
pub const SOLVER_ENV: &str = "CATACHC_SOLVER";

/// Placeholder replaced by the script path in a command template.
pub const FILE_PLACEHOLDER: &str = "{file}";

const EXCERPT_BYTES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
    Timeout,
    Error,
}

impl Verdict {
    pub fn is_decisive(self) -> bool {
        matches!(self, Verdict::Sat | Verdict::Unsat)
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        Some(match s {
            "sat" => Verdict::Sat,
            "unsat" => Verdict::Unsat,
            "unknown" => Verdict::Unknown,
            "timeout" => Verdict::Timeout,
            "error" => Verdict::Error,
            _ => return None,
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Unknown => "unknown",
            Verdict::Timeout => "timeout",
            Verdict::Error => "error",
        })
    }
}

/// An external CHC solver: argument vector with a file placeholder, a wall-clock
/// timeout, and the answer words it prints.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub name: String,
    pub command: Vec<String>,
    pub timeout: Duration,
    pub vocabulary: Vec<(String, Verdict)>,
}

fn default_vocabulary() -> Vec<(String, Verdict)> {
    [("sat", Verdict::Sat), ("unsat", Verdict::Unsat), ("unknown", Verdict::Unknown)].into_iter().map(|(w, v)| (w.to_string(), v)).collect()
}

impl SolverConfig {
    /// Parses a shell-style template such as `z3 fp.engine=spacer {file}`. Without a
    /// placeholder the path is appended.
    pub fn from_template(name: &str, template: &str, timeout: Duration) -> Result<SolverConfig> {
        if timeout.is_zero() {
            return Err(Error::Config(format!("solver `{name}`: timeout must be positive")));
        }
        let mut command = shlex::split(template)
            .filter(|v| !v.is_empty())
            .ok_or_else(|| Error::Config(format!("solver `{name}`: cannot parse command `{template}`")))?;
        if !command.iter().any(|a| a.contains(FILE_PLACEHOLDER)) {
            command.push(FILE_PLACEHOLDER.to_string());
        }
        Ok(SolverConfig { name: name.to_string(), command, timeout, vocabulary: default_vocabulary() })
    }

    /// The solver named by `CATACHC_SOLVER`, if set.
    pub fn from_env(timeout: Duration) -> Option<Result<SolverConfig>> {
        let t = std::env::var(SOLVER_ENV).ok().filter(|t| !t.trim().is_empty())?;
        Some(SolverConfig::from_template("default", &t, timeout))
    }

    /// Checks that the executable can be found.
    pub fn resolve(&self) -> Result<PathBuf> {
        let exe = &self.command[0];
        let found = if exe.contains('/') {
            Some(PathBuf::from(exe)).filter(|p| p.is_file())
        } else {
            std::env::var_os("PATH").and_then(|paths| std::env::split_paths(&paths).map(|d| d.join(exe)).find(|p| p.is_file()))
        };
        found.ok_or_else(|| Error::Config(format!("solver `{}`: executable `{exe}` not found", self.name)))
    }

    fn argv(&self, file: &Path) -> Vec<String> {
        let f = file.display().to_string();
        self.command.iter().map(|a| a.replace(FILE_PLACEHOLDER, &f)).collect()
    }

    /// Verdict named by the first output token that is in the vocabulary.
    pub fn classify(&self, output: &str) -> Option<Verdict> {
        output
            .split_whitespace()
            .map(|w| w.trim_matches(|c: char| c == '(' || c == ')'))
            .find_map(|w| self.vocabulary.iter().find(|(word, _)| word == w).map(|(_, v)| *v))
    }
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub verdict: Verdict,
    pub wall: Duration,
    /// The beginning of standard output, then standard error.
    pub excerpt: String,
}

fn excerpt(out: &[u8], err: &[u8]) -> String {
    let mut s = String::from_utf8_lossy(out).into_owned();
    if !err.is_empty() {
        s.push_str(&String::from_utf8_lossy(err));
    }
    if s.len() > EXCERPT_BYTES {
        let mut cut = EXCERPT_BYTES;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
    }
    s
}

#[cfg(unix)]
fn own_group(cmd: &mut Command) {
    use std::os::unix::process::CommandExt;
    cmd.process_group(0);
}

#[cfg(not(unix))]
fn own_group(_: &mut Command) {}

#[cfg(unix)]
fn kill_tree(child: &mut std::process::Child) {
    // The child leads its own process group, so this also reaches its descendants.
    unsafe {
        libc::kill(-(child.id() as libc::pid_t), libc::SIGKILL);
    }
    let _ = child.kill();
}

#[cfg(not(unix))]
fn kill_tree(child: &mut std::process::Child) {
    let _ = child.kill();
}

fn drain(r: Option<impl Read + Send + 'static>) -> std::thread::JoinHandle<Vec<u8>> {
    std::thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut r) = r {
            let _ = r.read_to_end(&mut buf);
        }
        buf
    })
}

/// Runs the solver on `file`, killing it at the timeout. A run whose wall time
/// reaches the timeout is reported as a timeout.
pub fn run_solver(file: &Path, cfg: &SolverConfig) -> SolverResult {
    let start = Instant::now();
    let fail = |msg: String| SolverResult { verdict: Verdict::Error, wall: start.elapsed(), excerpt: msg };
    if !file.is_file() {
        return fail(format!("no such file: {}", file.display()));
    }
    let argv = cfg.argv(file);
    let mut cmd = Command::new(&argv[0]);
    cmd.args(&argv[1..]).stdin(Stdio::null()).stdout(Stdio::piped()).stderr(Stdio::piped());
    own_group(&mut cmd);
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => return fail(format!("cannot start `{}`: {e}", argv[0])),
    };
    let (out, err) = (drain(child.stdout.take()), drain(child.stderr.take()));
    let status = loop {
        match child.try_wait() {
            Ok(Some(s)) => break Some(s),
            Ok(None) if start.elapsed() >= cfg.timeout => {
                kill_tree(&mut child);
                let _ = child.wait();
                break None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(e) => return fail(format!("waiting for `{}`: {e}", argv[0])),
        }
    };
    let wall = start.elapsed();
    let (out, err) = (out.join().unwrap_or_default(), err.join().unwrap_or_default());
    let text = excerpt(&out, &err);
    if status.is_none() || wall >= cfg.timeout {
        return SolverResult { verdict: Verdict::Timeout, wall: wall.max(cfg.timeout), excerpt: text };
    }
    let verdict = match cfg.classify(&String::from_utf8_lossy(&out)) {
        Some(v) => v,
        None if status.is_some_and(|s| !s.success()) && out.is_empty() => Verdict::Error,
        None => Verdict::Unknown,
    };
    SolverResult { verdict, wall, excerpt: text }
}

/// Which clause set a verification run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// The input clauses, catamorphisms included.
    Src,
    Wwo,
    W,
    Wo,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Src, Mode::Wwo, Mode::W, Mode::Wo];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Src => "src",
            Mode::Wwo => "wwo",
            Mode::W => "w",
            Mode::Wo => "wo",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A solver verdict as reported for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    /// `unsat` of the ADT-free clauses, which overapproximate the source.
    pub unreliable: bool,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unreliable {
            write!(f, "{}-unreliable (overapproximation)", self.verdict)
        } else {
            write!(f, "{}", self.verdict)
        }
    }
}

/// Marks `unsat` of the `wo` clauses as unreliable; other verdicts pass through.
pub fn classify_outcome(mode: Mode, r: &SolverResult) -> Outcome {
    Outcome { verdict: r.verdict, unreliable: mode == Mode::Wo && r.verdict == Verdict::Unsat }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(v: Verdict) -> SolverResult {
        SolverResult { verdict: v, wall: Duration::ZERO, excerpt: String::new() }
    }

    #[test]
    fn only_wo_unsat_is_downgraded() {
        assert_eq!(classify_outcome(Mode::Wo, &result(Verdict::Unsat)).to_string(), "unsat-unreliable (overapproximation)");
        assert_eq!(classify_outcome(Mode::Wwo, &result(Verdict::Sat)).to_string(), "sat");
        assert_eq!(classify_outcome(Mode::W, &result(Verdict::Timeout)).to_string(), "timeout");
        assert_eq!(classify_outcome(Mode::Wo, &result(Verdict::Sat)).to_string(), "sat");
    }

    #[test]
    fn first_answer_token_wins() {
        let c = SolverConfig::from_template("t", "solver -v", Duration::from_secs(1)).unwrap();
        assert_eq!(c.command, vec!["solver", "-v", "{file}"]);
        assert_eq!(c.classify("; comment\nunsat\n(model)\n"), Some(Verdict::Unsat));
        assert_eq!(c.classify("warning: x\nsat\nunsat"), Some(Verdict::Sat));
        assert_eq!(c.classify("(error \"line 1\")"), None);
    }

    #[test]
    fn templates_are_validated() {
        assert!(SolverConfig::from_template("t", "z3 {file}", Duration::ZERO).is_err());
        assert!(SolverConfig::from_template("t", "'unterminated", Duration::from_secs(1)).is_err());
        let c = SolverConfig::from_template("t", "no-such-solver-xyz {file}", Duration::from_secs(1)).unwrap();
        assert!(c.resolve().is_err());
    }
}
