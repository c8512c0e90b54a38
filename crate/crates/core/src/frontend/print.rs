use std::collections::BTreeMap;
use std::fmt::Write;

use super::ast::{CataDirective, ItemKind};
use crate::cata::print_spec;
use crate::ir::{Clause, Program, Sort, SortPat};

fn pat(s: &Sort) -> SortPat {
    match s {
        Sort::Int => SortPat::Int,
        Sort::Bool => SortPat::Bool,
        Sort::Adt(n, ps) => SortPat::Adt(n.clone(), ps.iter().map(pat).collect()),
    }
}

/// Canonical source text of a program: declarations, abstractions, specs, clauses, queries.
pub fn print_program(prog: &Program) -> String {
    let mut out = String::new();
    for d in prog.datatypes.values().filter(|d| d.name != "list") {
        writeln!(out, "{}", ItemKind::Data(d.clone())).unwrap();
    }
    for (p, sorts) in &prog.preds {
        if let Some(sig) = prog.catas.get(p) {
            let c = CataDirective {
                name: p.clone(),
                inputs: sig.inputs.iter().map(pat).collect(),
                adt: pat(&sig.adt),
                outputs: sig.outputs.iter().map(pat).collect(),
            };
            writeln!(out, "{}", ItemKind::Cata(c)).unwrap();
        } else {
            writeln!(out, "{}", ItemKind::Pred(p.clone(), sorts.iter().map(pat).collect())).unwrap();
        }
    }
    for a in &prog.abstractions {
        let body: Vec<String> = a.atoms.iter().map(|x| x.to_string()).collect();
        writeln!(out, ":- cata_abs {} ==> {}.", a.sort, body.join(", ")).unwrap();
    }
    for s in &prog.user_specs {
        writeln!(out, "{}", print_spec(s)).unwrap();
    }
    for c in prog.clauses.iter().chain(&prog.queries) {
        writeln!(out, "{c}").unwrap();
    }
    out
}

/// Source text of a bare clause set: the datatypes of `prog`, a declaration for
/// every predicate with the sorts of its arguments, then the clauses in order.
/// Reading it back with [`load_clauses`](super::load_clauses) gives the same clauses.
pub fn print_clauses(cls: &[Clause], prog: &Program) -> String {
    let mut out = String::new();
    for d in prog.datatypes.values().filter(|d| d.name != "list") {
        writeln!(out, "{}", ItemKind::Data(d.clone())).unwrap();
    }
    let mut preds: BTreeMap<&str, Vec<SortPat>> = BTreeMap::new();
    for c in cls {
        for a in c.head.atom().into_iter().chain(&c.body) {
            preds.entry(&a.pred).or_insert_with(|| a.args.iter().map(|t| pat(&t.sort())).collect());
        }
    }
    for (p, sorts) in preds {
        writeln!(out, "{}", ItemKind::Pred(p.to_string(), sorts)).unwrap();
    }
    for c in cls {
        writeln!(out, "{c}").unwrap();
    }
    out
}
