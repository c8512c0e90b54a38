use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Duration;

use crate::backend::{Mode, Outcome, Verdict};

/// One solver run of one task in one mode.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub task: String,
    pub family: String,
    pub solver: String,
    pub mode: Mode,
    pub expect: Verdict,
    pub outcome: Outcome,
    pub wall: Duration,
    /// Time of the whole transformation for the task; zero in `src` mode.
    pub transform: Duration,
    pub note: String,
}

impl BenchRow {
    /// The verdict matches the expected one; unknown expectations match anything.
    pub fn agrees(&self) -> bool {
        self.expect == Verdict::Unknown || self.outcome.verdict == self.expect
    }
}

/// Counts of one (solver, mode) column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub sat: usize,
    pub unsat: usize,
}

impl Counts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Sat => self.sat += 1,
            Verdict::Unsat => self.unsat += 1,
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    /// Sorted by task, solver, then mode.
    pub rows: Vec<BenchRow>,
    pub solvers: Vec<String>,
    pub modes: Vec<Mode>,
    /// Tasks whose transformation failed, with the diagnostic.
    pub failures: Vec<(String, String)>,
}

pub const TSV_HEADER: &str = "task\tfamily\tsolver\tmode\texpected\tverdict\twall_s\ttransform_s\tagrees\tnote";

impl BenchReport {
    pub fn new(mut rows: Vec<BenchRow>, solvers: Vec<String>, modes: Vec<Mode>, mut failures: Vec<(String, String)>) -> BenchReport {
        let pos = |m: Mode| modes.iter().position(|x| *x == m).unwrap_or(usize::MAX);
        rows.sort_by(|a, b| (&a.task, &a.solver, pos(a.mode)).cmp(&(&b.task, &b.solver, pos(b.mode))));
        failures.sort();
        BenchReport { rows, solvers, modes, failures }
    }

    fn families(&self) -> Vec<String> {
        let mut f: Vec<String> = self.rows.iter().map(|r| r.family.clone()).collect();
        f.sort();
        f.dedup();
        f
    }

    /// Counts per family and column.
    pub fn counts(&self) -> BTreeMap<(String, String, Mode), Counts> {
        let mut out: BTreeMap<(String, String, Mode), Counts> = BTreeMap::new();
        for r in &self.rows {
            out.entry((r.family.clone(), r.solver.clone(), r.mode)).or_default().add(r.outcome.verdict);
        }
        out
    }

    /// Counts per column over all rows.
    pub fn totals(&self) -> BTreeMap<(String, Mode), Counts> {
        let mut out: BTreeMap<(String, Mode), Counts> = BTreeMap::new();
        for r in &self.rows {
            out.entry((r.solver.clone(), r.mode)).or_default().add(r.outcome.verdict);
        }
        out
    }

    /// The totals equal the sums of the per-family counts.
    pub fn totals_consistent(&self) -> bool {
        let mut sums: BTreeMap<(String, Mode), Counts> = BTreeMap::new();
        for ((_, s, m), c) in self.counts() {
            let e = sums.entry((s, m)).or_default();
            e.sat += c.sat;
            e.unsat += c.unsat;
        }
        sums == self.totals()
    }

    /// Tasks where the `w` and `wwo` runs of one solver are decisive and differ.
    pub fn decisive_disagreements(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut by: BTreeMap<(&str, &str), BTreeMap<Mode, Verdict>> = BTreeMap::new();
        for r in &self.rows {
            by.entry((&r.task, &r.solver)).or_default().insert(r.mode, r.outcome.verdict);
        }
        for ((t, s), v) in by {
            if let (Some(a), Some(b)) = (v.get(&Mode::W), v.get(&Mode::Wwo)) {
                if a.is_decisive() && b.is_decisive() && a != b {
                    out.push(format!("{t} ({s}): w {a}, wwo {b}"));
                }
            }
        }
        out
    }

    pub fn agreement(&self) -> (usize, usize) {
        (self.rows.iter().filter(|r| r.agrees()).count(), self.rows.len())
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("{TSV_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{:.3}\t{:.3}\t{}\t{}",
                r.task,
                r.family,
                r.solver,
                r.mode,
                r.expect,
                r.outcome,
                r.wall.as_secs_f64(),
                r.transform.as_secs_f64(),
                r.agrees(),
                r.note.replace(['\t', '\n'], " ")
            );
        }
        out
    }

    /// Transformation time per family, summed over its tasks.
    fn transform_times(&self) -> BTreeMap<String, Duration> {
        let mut seen = std::collections::HashSet::new();
        let mut out: BTreeMap<String, Duration> = BTreeMap::new();
        for r in self.rows.iter().filter(|r| r.mode != Mode::Src) {
            if seen.insert(&r.task) {
                *out.entry(r.family.clone()).or_default() += r.transform;
            }
        }
        out
    }

    /// Aligned table: one row per family, an `s` and a `u` column per solver and
    /// mode, the transformation time, and a totals row.
    pub fn render_table(&self) -> String {
        let mut header = vec!["program".to_string()];
        for s in &self.solvers {
            for m in &self.modes {
                header.push(format!("{s}:{m}:s"));
                header.push(format!("{s}:{m}:u"));
            }
        }
        header.push("T(s)".into());
        let counts = self.counts();
        let times = self.transform_times();
        let mut lines: Vec<Vec<String>> = vec![header];
        for f in self.families() {
            let mut row = vec![f.clone()];
            for s in &self.solvers {
                for m in &self.modes {
                    let c = counts.get(&(f.clone(), s.clone(), *m)).copied().unwrap_or_default();
                    row.push(c.sat.to_string());
                    row.push(c.unsat.to_string());
                }
            }
            row.push(format!("{:.2}", times.get(&f).copied().unwrap_or_default().as_secs_f64()));
            lines.push(row);
        }
        let totals = self.totals();
        let mut row = vec!["total".to_string()];
        for s in &self.solvers {
            for m in &self.modes {
                let c = totals.get(&(s.clone(), *m)).copied().unwrap_or_default();
                row.push(c.sat.to_string());
                row.push(c.unsat.to_string());
            }
        }
        row.push(format!("{:.2}", times.values().sum::<Duration>().as_secs_f64()));
        lines.push(row);

        let widths: Vec<usize> = (0..lines[0].len()).map(|i| lines.iter().map(|l| l[i].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for (k, l) in lines.iter().enumerate() {
            let cells: Vec<String> =
                l.iter().zip(&widths).enumerate().map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") }).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
            if k == 0 || k == lines.len() - 2 {
                out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
                out.push('\n');
            }
        }
        let (ok, n) = self.agreement();
        let _ = writeln!(out, "agreement with expected verdicts: {ok}/{n}");
        for d in self.decisive_disagreements() {
            let _ = writeln!(out, "w/wwo disagreement: {d}");
        }
        for (t, e) in &self.failures {
            let _ = writeln!(out, "transformation failed: {t}: {e}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(task: &str, family: &str, mode: Mode, v: Verdict) -> BenchRow {
        BenchRow {
            task: task.into(),
            family: family.into(),
            solver: "z".into(),
            mode,
            expect: Verdict::Sat,
            outcome: crate::backend::classify_outcome(
                mode,
                &crate::backend::SolverResult { verdict: v, wall: Duration::ZERO, excerpt: String::new() },
            ),
            wall: Duration::from_millis(10),
            transform: Duration::from_millis(3),
            note: String::new(),
        }
    }

    #[test]
    fn totals_are_column_sums_and_disagreements_are_found() {
        let rows = vec![
            row("a", "f", Mode::W, Verdict::Sat),
            row("a", "f", Mode::Wwo, Verdict::Unsat),
            row("b", "f", Mode::W, Verdict::Sat),
            row("c", "g", Mode::Wo, Verdict::Unsat),
        ];
        let r = BenchReport::new(rows, vec!["z".into()], vec![Mode::Wwo, Mode::W, Mode::Wo], vec![]);
        assert!(r.totals_consistent());
        assert_eq!(r.totals()[&("z".to_string(), Mode::W)], Counts { sat: 2, unsat: 0 });
        assert_eq!(r.decisive_disagreements(), vec!["a (z): w sat, wwo unsat"]);
        let t = r.render_table();
        assert!(
            t.lines().any(|l| l.starts_with("total") && l.split_whitespace().collect::<Vec<_>>()[1..7] == ["0", "1", "2", "0", "0", "1"]),
            "{t}"
        );
        assert_eq!(r.to_tsv().lines().count(), 5);
        assert!(r.to_tsv().contains("unsat-unreliable (overapproximation)"));
    }
}
