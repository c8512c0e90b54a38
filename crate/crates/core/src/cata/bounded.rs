use std::collections::{BTreeSet, HashMap};

use super::schema::CataDef;
use crate::error::Error;
use crate::ir::{Clause, Program};
use crate::oracle::{bounded_least_model, Limits, Universe, Value};

/// Outcome of a bounded functionality and totality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionalityReport {
    /// Every input tuple had exactly one output tuple.
    Ok { checked: usize },
    /// Some input tuple had no output.
    NotTotal { input: String },
    /// Some input tuple had several outputs.
    NotFunctional { input: String, outputs: Vec<String> },
    /// The evaluation budget ran out before a verdict.
    Inconclusive(String),
}

impl FunctionalityReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, FunctionalityReport::Ok { .. })
    }
}

impl std::fmt::Display for FunctionalityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctionalityReport::Ok { checked } => write!(f, "functional and total on {checked} inputs"),
            FunctionalityReport::NotTotal { input } => write!(f, "not total: no output for {input}"),
            FunctionalityReport::NotFunctional { input, outputs } => {
                write!(f, "not functional: {input} has outputs {}", outputs.join(", "))
            }
            FunctionalityReport::Inconclusive(m) => write!(f, "inconclusive: {m}"),
        }
    }
}

/// Defining clauses of `name` and of every catamorphism it depends on.
pub(crate) fn closure_clauses(prog: &Program, name: &str) -> Vec<Clause> {
    let mut todo = vec![name.to_string()];
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while let Some(n) = todo.pop() {
        if !seen.insert(n.clone()) {
            continue;
        }
        for c in prog.clauses_for(&n) {
            todo.extend(c.body.iter().map(|a| a.pred.clone()));
            out.push(c.clone());
        }
    }
    out
}

fn product(domains: &[Vec<Value>]) -> Vec<Vec<Value>> {
    domains
        .iter()
        .fold(vec![Vec::new()], |acc, d| acc.iter().flat_map(|p| d.iter().map(move |v| [p.clone(), vec![v.clone()]].concat())).collect())
}

/// Evaluates the catamorphism on every ADT value up to `size_bound` built from
/// `domain`, for every input tuple over `domain`, and counts the output tuples.
pub fn check_functionality_bounded(prog: &Program, cd: &CataDef, size_bound: usize, domain: &[i64]) -> FunctionalityReport {
    let u = Universe::new(&prog.datatypes, domain, size_bound);
    let model = match bounded_least_model(&closure_clauses(prog, &cd.name), &u, Limits::default()) {
        Ok(m) => m,
        Err(Error::Budget(m)) => return FunctionalityReport::Inconclusive(m),
        Err(e) => return FunctionalityReport::Inconclusive(e.to_string()),
    };
    let k = cd.sig.adt_pos() + 1;
    let mut outputs: HashMap<Vec<Value>, Vec<Vec<Value>>> = HashMap::new();
    for t in model.facts(&cd.name) {
        outputs.entry(t[..k].to_vec()).or_default().push(t[k..].to_vec());
    }
    let mut domains: Vec<Vec<Value>> = cd.sig.inputs.iter().map(|s| u.values(s)).collect();
    domains.push(u.values(&cd.sig.adt));
    let show = |vs: &[Value]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
    let mut checked = 0;
    for key in product(&domains) {
        match outputs.get(&key).map(Vec::as_slice) {
            None | Some([]) => return FunctionalityReport::NotTotal { input: format!("{}({})", cd.name, show(&key)) },
            Some([_]) => checked += 1,
            Some(many) => {
                return FunctionalityReport::NotFunctional {
                    input: format!("{}({})", cd.name, show(&key)),
                    outputs: many.iter().map(|o| show(o)).collect(),
                }
            }
        }
    }
    FunctionalityReport::Ok { checked }
}
