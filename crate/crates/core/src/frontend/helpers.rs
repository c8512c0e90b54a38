//! Helper predicates that keep every ADT argument of a body atom a distinct variable.
//!
//! A constructor term `c(t1,...,tn)` in a program body atom becomes a fresh
//! variable `V` plus the atom `mk_c(t1,...,tn,V)` defined by the fact
//! `mk_c(Y1,...,Yn,c(Y1,...,Yn))`. A repeated ADT variable `X` becomes a fresh `V`
//! plus `eq_s(X,V)` defined by `eq_s(Y,Y)`. Both are ordinary program predicates.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::ir::{Atom, Clause, Head, NameSupply, Program, Sort, Term, Var};

/// Symbol-safe rendering of a sort, e.g. `list(int)` -> `list_int`.
pub fn sort_tag(s: &Sort) -> String {
    let mut out = String::new();
    for ch in s.to_string().chars() {
        if ch.is_alphanumeric() {
            out.push(ch);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_end_matches('_').to_string()
}

struct Helpers<'a> {
    prog: &'a mut Program,
    made: HashMap<String, String>,
    new_clauses: Vec<Clause>,
}

impl Helpers<'_> {
    fn pred(&mut self, key: String, sorts: Vec<Sort>, make: impl FnOnce(&str, &mut NameSupply) -> Clause) -> String {
        if let Some(p) = self.made.get(&key) {
            return p.clone();
        }
        let name = self.prog.names.readable_pred(&key);
        self.prog.preds.insert(name.clone(), sorts);
        let c = make(&name, &mut self.prog.names);
        self.new_clauses.push(c);
        self.made.insert(key, name.clone());
        name
    }

    fn mk(&mut self, ctor: &str, sort: &Sort, arg_sorts: Vec<Sort>) -> String {
        let key = format!("mk_{ctor}_{}", sort_tag(sort));
        let mut sorts = arg_sorts.clone();
        sorts.push(sort.clone());
        let (ctor, sort) = (ctor.to_string(), sort.clone());
        self.pred(key, sorts, move |name, ns| {
            let ys: Vec<Term> = arg_sorts.iter().map(|s| Term::Var(ns.fresh_var(s.clone()))).collect();
            let mut args = ys.clone();
            args.push(Term::ctor(&ctor, ys, sort));
            Clause::new(Head::Atom(Atom::new(name, args)), vec![], vec![])
        })
    }

    fn eq(&mut self, sort: &Sort) -> String {
        let key = format!("eq_{}", sort_tag(sort));
        let sort = sort.clone();
        self.pred(key, vec![sort.clone(), sort.clone()], move |name, ns| {
            let y = Term::Var(ns.fresh_var(sort));
            Clause::new(Head::Atom(Atom::new(name, vec![y.clone(), y])), vec![], vec![])
        })
    }

    /// Rewrites one program atom; returns the helper atoms to place before it.
    fn rewrite(&mut self, atom: &mut Atom) -> Vec<Atom> {
        let mut pre = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        for arg in atom.args.iter_mut() {
            let sort = arg.sort();
            if !sort.is_adt() {
                continue;
            }
            match arg.clone() {
                Term::Var(v) if seen.insert(v.name.clone()) => {}
                Term::Var(v) => {
                    let fresh = self.prog.names.fresh_var(sort.clone());
                    let p = self.eq(&sort);
                    pre.push(Atom::new(p, vec![Term::Var(v), Term::Var(fresh.clone())]));
                    seen.insert(fresh.name.clone());
                    *arg = Term::Var(fresh);
                }
                Term::Ctor { name, args, sort } => {
                    let fresh = self.prog.names.fresh_var(sort.clone());
                    self.decompose(&name, args, &sort, &fresh, &mut pre);
                    seen.insert(fresh.name.clone());
                    *arg = Term::Var(fresh);
                }
                _ => {}
            }
        }
        pre
    }

    fn decompose(&mut self, ctor: &str, args: Vec<Term>, sort: &Sort, target: &Var, out: &mut Vec<Atom>) {
        let arg_sorts: Vec<Sort> = args.iter().map(Term::sort).collect();
        let p = self.mk(ctor, sort, arg_sorts);
        let mut flat = Vec::new();
        let mut inner = Vec::new();
        for a in args {
            match a {
                Term::Ctor { name, args, sort } if sort.is_adt() => {
                    let v = self.prog.names.fresh_var(sort.clone());
                    self.decompose(&name, args, &sort, &v, &mut inner);
                    flat.push(Term::Var(v));
                }
                other => flat.push(other),
            }
        }
        flat.push(Term::Var(target.clone()));
        let mut atom = Atom::new(p, flat);
        let pre = self.rewrite(&mut atom);
        out.extend(inner);
        out.extend(pre);
        out.push(atom);
    }
}

/// Applies the rewriting to every definite clause and rejects constructor terms in
/// catamorphism atoms, where the schema requires variables.
pub fn synthesize_helpers(prog: &mut Program) -> Result<()> {
    let clauses = std::mem::take(&mut prog.clauses);
    let mut h = Helpers { prog, made: HashMap::new(), new_clauses: Vec::new() };
    let mut out = Vec::new();
    for mut c in clauses {
        let mut body = Vec::new();
        for mut a in std::mem::take(&mut c.body) {
            if h.prog.is_cata(&a.pred) {
                if let Some(t) = a.args.iter().find(|t| t.sort().is_adt() && t.as_var().is_none()) {
                    return Err(Error::Sort(format!("clause {}: constructor term `{t}` in catamorphism atom `{a}`", c.id)));
                }
                body.push(a);
                continue;
            }
            let pre = h.rewrite(&mut a);
            body.extend(pre);
            body.push(a);
        }
        c.body = body;
        out.push(c);
    }
    let mut next = out.iter().chain(&h.prog.queries).map(|c| c.id).max().unwrap_or(0);
    for mut c in std::mem::take(&mut h.new_clauses) {
        next += 1;
        c.id = next;
        out.push(c);
    }
    prog.clauses = out;
    Ok(())
}
