//! Canonical strings for clauses, used to decide definition equivalence.

use std::collections::HashMap;

use super::normalize::rename_vars;
use super::term::{Atom, Clause, Head};

/// Canonical string of a clause.
///
/// For a definition-shaped clause (atom head, one program atom, otherwise
/// catamorphism atoms) the string is invariant under renaming of the head
/// predicate and variables, reordering of head variables, and reordering of body
/// atoms: two such definitions are equivalent iff their strings coincide.
/// Any other clause gets a weaker form: stable atom sort by predicate name and
/// first-occurrence variable renaming.
pub fn canonical_clause(c: &Clause, is_cata: &dyn Fn(&str) -> bool) -> String {
    match definition_parts(c, is_cata) {
        Some((catas, prog)) => canonical_definition(c, &catas, prog),
        None => canonical_general(c),
    }
}

fn definition_parts<'a>(c: &'a Clause, is_cata: &dyn Fn(&str) -> bool) -> Option<(Vec<&'a Atom>, &'a Atom)> {
    let Head::Atom(_) = &c.head else {
        return None;
    };
    if !c.constraints.is_empty() {
        return None;
    }
    let (catas, progs): (Vec<&Atom>, Vec<&Atom>) = c.body.iter().partition(|a| is_cata(&a.pred));
    (progs.len() == 1).then(|| (catas, progs[0]))
}

fn canonical_definition(c: &Clause, catas: &[&Atom], prog: &Atom) -> String {
    let prog_adt: Vec<String> = prog.adt_vars().into_iter().map(|v| v.name).collect();
    let position = |a: &Atom| a.adt_vars().first().and_then(|v| prog_adt.iter().position(|n| *n == v.name)).unwrap_or(usize::MAX);
    let mut ordered: Vec<&Atom> = catas.to_vec();
    ordered.sort_by(|a, b| (a.pred.as_str(), position(a)).cmp(&(b.pred.as_str(), position(b))));
    ordered.push(prog);

    let mut names: HashMap<String, String> = HashMap::new();
    for a in &ordered {
        for v in a.vars() {
            let k = names.len();
            names.entry(v.name).or_insert_with(|| format!("_{k}"));
        }
    }
    let body: Vec<String> = ordered.iter().map(|a| rename_atom(a, &names).to_string()).collect();
    let mut head: Vec<usize> = c
        .head
        .atom()
        .map(|h| h.vars())
        .unwrap_or_default()
        .iter()
        .map(|v| names.get(&v.name).map(|n| n[1..].parse::<usize>().unwrap()).unwrap_or(usize::MAX))
        .collect();
    head.sort_unstable();
    head.dedup();
    let head: Vec<String> = head.iter().map(|k| if *k == usize::MAX { "?".into() } else { format!("_{k}") }).collect();
    format!("({}) <- {}", head.join(","), body.join(", "))
}

fn rename_atom(a: &Atom, names: &HashMap<String, String>) -> Atom {
    let c = Clause::new(Head::False, vec![], vec![a.clone()]);
    rename_vars(&c, names).body.remove(0)
}

fn canonical_general(c: &Clause) -> String {
    let mut body = c.body.clone();
    body.sort_by(|a, b| a.pred.cmp(&b.pred));
    let mut names: HashMap<String, String> = HashMap::new();
    let name = |n: String, names: &mut HashMap<String, String>| {
        let k = names.len();
        names.entry(n).or_insert_with(|| format!("_{k}"));
    };
    if let Head::Atom(h) = &c.head {
        h.vars().into_iter().for_each(|v| name(v.name, &mut names));
    }
    for a in &body {
        a.vars().into_iter().for_each(|v| name(v.name, &mut names));
    }
    // Order constraints by their text with still-unnamed variables masked, then
    // name the remaining variables in that order.
    let masked = |cs: &crate::ir::Constraint, names: &HashMap<String, String>| {
        let mut vs = Vec::new();
        cs.collect_vars(&mut vs);
        let mut m = names.clone();
        for v in vs {
            m.entry(v.name).or_insert_with(|| "_".into());
        }
        let tmp = Clause::new(Head::False, vec![cs.clone()], vec![]);
        rename_vars(&tmp, &m).constraints[0].to_string()
    };
    let mut cons = c.constraints.clone();
    cons.sort_by_cached_key(|x| masked(x, &names));
    for x in &cons {
        let mut vs = Vec::new();
        x.collect_vars(&mut vs);
        vs.into_iter().for_each(|v| name(v.name, &mut names));
    }
    let renamed = rename_vars(&Clause::new(c.head.clone(), cons, body), &names);
    let mut cs: Vec<String> = renamed.constraints.iter().map(|x| x.to_string()).collect();
    cs.sort();
    let mut items = cs;
    items.extend(renamed.body.iter().map(|a| a.to_string()));
    format!("{} <- {}", renamed.head, items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::term::{Sort, Term};

    fn lc(x: &str, l: &str, n: &str) -> Atom {
        Atom::new("listcount", vec![Term::int_var(x), Term::var(l, Sort::list_int()), Term::int_var(n)])
    }

    fn def(head: Vec<&str>, body: Vec<Atom>) -> Clause {
        let vars: Vec<Term> = head
            .iter()
            .map(|n| {
                let s = body.iter().flat_map(|a| a.vars()).find(|v| v.name == *n).unwrap().sort;
                Term::var(*n, s)
            })
            .collect();
        Clause::new(Head::Atom(Atom::new("new", vars)), vec![], body)
    }

    fn is_cata(p: &str) -> bool {
        p == "listcount"
    }

    #[test]
    fn permuted_and_renamed_definitions_coincide() {
        let d1 = def(
            vec!["A", "B", "C", "E", "F"],
            vec![
                lc("A", "B", "C"),
                lc("A", "E", "F"),
                Atom::new("double", vec![Term::var("B", Sort::list_int()), Term::var("E", Sort::list_int())]),
            ],
        );
        let d1b = def(
            vec!["Q", "P", "Z", "Y", "X"],
            vec![
                Atom::new("double", vec![Term::var("Y", Sort::list_int()), Term::var("P", Sort::list_int())]),
                lc("X", "P", "Q"),
                lc("X", "Y", "Z"),
            ],
        );
        assert_eq!(canonical_clause(&d1, &is_cata), canonical_clause(&d1b, &is_cata));
    }

    #[test]
    fn different_program_atoms_differ() {
        let l = |n: &str| Term::var(n, Sort::list_int());
        let a = def(vec!["A", "B", "C"], vec![lc("A", "B", "C"), Atom::new("eq", vec![l("B"), l("B")])]);
        let b = def(vec!["A", "B", "C"], vec![lc("A", "B", "C"), Atom::new("app", vec![l("B"), l("B")])]);
        assert_ne!(canonical_clause(&a, &is_cata), canonical_clause(&b, &is_cata));
    }
}
