use std::collections::{HashMap, HashSet};

use crate::cata::split_cata_atom;
use crate::error::{Error, Result};
use crate::ir::{normalize_clause, Atom, Clause, Constraint, NameSupply, Program, Term, Var};

/// Decomposition of a valid query `false <- c, cata_1(X,T_1,Y_1), ..., p(Z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryShape {
    pub constraints: Vec<Constraint>,
    pub catas: Vec<Atom>,
    pub program_atom: Option<Atom>,
    pub inputs: Vec<Var>,
}

/// Checks the shape conditions of a query and returns it normalized, with
/// duplicate catamorphism atoms on one ADT variable merged.
pub fn validate_query(q: &Clause, prog: &Program, supply: &mut NameSupply) -> Result<(Clause, QueryShape)> {
    let fail = |msg: String| Err(Error::Query(format!("query {}: {msg}", q.id)));
    if !q.is_query() {
        return fail("head is not `false`".into());
    }
    let progs: Vec<&Atom> = q.body.iter().filter(|a| !prog.is_cata(&a.pred)).collect();
    let catas: Vec<&Atom> = q.body.iter().filter(|a| prog.is_cata(&a.pred)).collect();
    if progs.len() > 1 {
        return fail(format!("{} program atoms; exactly one is supported", progs.len()));
    }
    if progs.is_empty() && !catas.is_empty() {
        return fail("catamorphism atoms without a program atom".into());
    }
    let mut z: Vec<Var> = Vec::new();
    if let Some(p) = progs.first() {
        for t in &p.args {
            match t {
                Term::Var(v) if !z.iter().any(|w| w.name == v.name) => z.push(v.clone()),
                Term::Var(v) => return fail(format!("variable `{}` repeated in `{p}`: Z not distinct variables", v.name)),
                other => return fail(format!("non-variable argument `{other}` in program atom `{p}`")),
            }
        }
    }
    for a in &catas {
        let (_, adt, _) = split_cata_atom(a, &prog.catas[&a.pred]);
        match adt {
            Term::Var(v) if z.iter().any(|w| w.name == v.name) => {}
            Term::Var(v) => return fail(format!("ADT variable `{}` of `{a}` is not an argument of the program atom", v.name)),
            other => return fail(format!("non-variable ADT argument `{other}` in `{a}`")),
        }
    }

    let mut n = normalize_clause(q, supply);
    merge_duplicates(&mut n, prog)?;

    let mut inputs: Vec<Var> = Vec::new();
    let mut outputs: HashSet<String> = HashSet::new();
    let zn: HashSet<&str> = z.iter().map(|v| v.name.as_str()).collect();
    let cata_atoms: Vec<Atom> = n.body.iter().filter(|a| prog.is_cata(&a.pred)).cloned().collect();
    for a in &cata_atoms {
        let (ins, _, outs) = split_cata_atom(a, &prog.catas[&a.pred]);
        for t in ins {
            let v = t.as_var().expect("normalized");
            if !inputs.iter().any(|w| w.name == v.name) {
                inputs.push(v.clone());
            }
        }
        for t in outs {
            let v = t.as_var().expect("normalized");
            if zn.contains(v.name.as_str()) {
                return fail(format!("output `{}` of `{a}` overlaps Z", v.name));
            }
            if !outputs.insert(v.name.clone()) {
                return fail(format!("output `{}` of `{a}` is shared with another catamorphism atom", v.name));
            }
        }
    }
    if let Some(v) = inputs.iter().find(|v| outputs.contains(&v.name) || zn.contains(v.name.as_str())) {
        return fail(format!("input `{}` overlaps an output or Z", v.name));
    }
    let shape = QueryShape {
        constraints: n.constraints.clone(),
        catas: cata_atoms,
        program_atom: n.body.iter().find(|a| !prog.is_cata(&a.pred)).cloned(),
        inputs,
    };
    Ok((n, shape))
}

/// `cata(X,T,Y1), cata(X,T,Y2)` becomes `cata(X,T,Y1)` plus `Y2 = Y1`.
fn merge_duplicates(c: &mut Clause, prog: &Program) -> Result<()> {
    let mut first: HashMap<(String, String), Atom> = HashMap::new();
    let mut body = Vec::new();
    for a in std::mem::take(&mut c.body) {
        let Some(sig) = prog.catas.get(&a.pred) else {
            body.push(a);
            continue;
        };
        let (ins, adt, outs) = split_cata_atom(&a, sig);
        let key = (a.pred.clone(), adt.to_string());
        match first.get(&key) {
            None => {
                first.insert(key, a.clone());
                body.push(a);
            }
            Some(prev) => {
                let (pins, _, pouts) = split_cata_atom(prev, sig);
                if pins != ins {
                    return Err(Error::Query(format!(
                        "query {}: `{prev}` and `{a}` apply `{}` to `{adt}` with different inputs",
                        c.id, a.pred
                    )));
                }
                for (y2, y1) in outs.iter().zip(pouts) {
                    c.constraints.push(Constraint::eq_terms(y2.clone(), y1.clone()));
                }
            }
        }
    }
    c.body = body;
    Ok(())
}
