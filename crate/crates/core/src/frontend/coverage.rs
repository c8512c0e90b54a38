use std::collections::HashSet;

use crate::ir::{Atom, Clause, Head, Program, Sort, Term};

/// Name of the synthesized predicate that holds for every value of `sort`.
pub fn true_pred_name(sort: &Sort) -> String {
    format!("true_{}", super::helpers::sort_tag(sort))
}

/// Whether `pred` is a coverage predicate made by [`ensure_true_pred`].
pub fn is_true_pred(pred: &str) -> bool {
    pred.starts_with("true_")
}

/// Ensures `true_<sort>` and its defining clauses exist (and those of the ADT
/// sorts it recurses through); returns the predicate name.
pub fn ensure_true_pred(prog: &mut Program, sort: &Sort) -> String {
    let name = true_pred_name(sort);
    if prog.preds.contains_key(&name) {
        return name;
    }
    prog.preds.insert(name.clone(), vec![sort.clone()]);
    prog.names.reserve(&name);
    let max_id = prog.clauses.iter().chain(&prog.queries).map(|c| c.id).max().unwrap_or(0);
    prog.names.skip_clause_ids(max_id);
    for (ctor, arg_sorts) in prog.ctors_of(sort) {
        let args: Vec<Term> = arg_sorts.iter().map(|s| Term::Var(prog.names.fresh_var(s.clone()))).collect();
        let mut body = Vec::new();
        for a in &args {
            let s = a.sort();
            if s.is_adt() {
                let p = ensure_true_pred(prog, &s);
                body.push(Atom::new(p, vec![a.clone()]));
            }
        }
        let head = Head::Atom(Atom::new(name.clone(), vec![Term::ctor(&ctor, args, sort.clone())]));
        let id = prog.names.next_clause_id();
        prog.clauses.push(Clause { id, ..Clause::new(head, vec![], body) });
    }
    name
}

/// Adds `true_<sort>(X)` for each ADT variable of a catamorphism atom that no
/// program atom of the body mentions.
pub fn cover_clause(prog: &mut Program, c: &Clause) -> Clause {
    if c.head.atom().is_some_and(|h| prog.is_cata(&h.pred)) {
        return c.clone();
    }
    let mut covered: HashSet<String> = HashSet::new();
    for a in c.body.iter().filter(|a| !prog.is_cata(&a.pred)) {
        covered.extend(a.adt_vars().into_iter().map(|v| v.name));
    }
    let mut out = c.clone();
    let cata_atoms: Vec<Atom> = c.body.iter().filter(|a| prog.is_cata(&a.pred)).cloned().collect();
    for a in cata_atoms {
        for v in a.adt_vars() {
            if covered.insert(v.name.clone()) {
                let p = ensure_true_pred(prog, &v.sort);
                out.body.push(Atom::new(p, vec![Term::Var(v)]));
            }
        }
    }
    out
}

/// Applies [`cover_clause`] to every definite clause and query.
pub fn ensure_cata_coverage(prog: &Program) -> Program {
    let mut out = prog.clone();
    let clauses = out.clauses.clone();
    out.clauses = clauses.iter().map(|c| cover_clause(&mut out, c)).collect();
    let queries = out.queries.clone();
    out.queries = queries.iter().map(|c| cover_clause(&mut out, c)).collect();
    out
}
