use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::specs::split_cata_atom;
use crate::error::{Error, Result};
use crate::ir::{CataSig, Clause, Program, Term, Var};

/// A catamorphism together with its defining clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CataDef {
    pub name: String,
    pub sig: CataSig,
    pub clauses: Vec<Clause>,
    /// Other catamorphisms called from the defining clauses.
    pub deps: BTreeSet<String>,
}

impl CataDef {
    /// Gathers the clauses defining `name` without checking them.
    pub fn collect(prog: &Program, name: &str) -> Result<CataDef> {
        let sig =
            prog.catas.get(name).ok_or_else(|| Error::Schema { name: name.into(), msg: "not declared with `:- cata`".into() })?.clone();
        let clauses: Vec<Clause> = prog.clauses_for(name).cloned().collect();
        let deps = clauses.iter().flat_map(|c| c.body.iter()).map(|a| a.pred.clone()).filter(|p| p != name).collect();
        Ok(CataDef { name: name.into(), sig, clauses, deps })
    }
}

fn schema(name: &str, msg: impl Into<String>) -> Error {
    Error::Schema { name: name.into(), msg: msg.into() }
}

fn distinct_vars<'a>(ts: impl IntoIterator<Item = &'a Term>, name: &str, what: &str, c: &Clause) -> Result<Vec<Var>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in ts {
        match t.as_var() {
            Some(v) if seen.insert(v.name.clone()) => out.push(v.clone()),
            _ => return Err(schema(name, format!("{what} must be distinct variables in `{c}`"))),
        }
    }
    Ok(out)
}

fn check_clause(prog: &Program, name: &str, sig: &CataSig, c: &Clause) -> Result<String> {
    let h = c.head.atom().expect("defining clause");
    let (ins, pat, outs) = split_cata_atom(h, sig);
    let ins = distinct_vars(ins, name, "inputs", c)?;
    for o in outs {
        if o.as_var().is_none() {
            return Err(schema(name, format!("outputs must be variables in `{c}`")));
        }
    }
    let Term::Ctor { name: ctor, args, .. } = pat else {
        return Err(schema(name, format!("ADT argument must be a constructor pattern in `{c}`")));
    };
    let fields = distinct_vars(args, name, "constructor arguments", c)?;
    if fields.iter().any(|f| ins.iter().any(|i| i.name == f.name)) {
        return Err(schema(name, format!("constructor argument shadows an input in `{c}`")));
    }
    let mut known: HashSet<String> = h.vars().into_iter().map(|v| v.name).collect();
    let mut calls: HashSet<(String, String)> = HashSet::new();
    for a in &c.body {
        let asig = prog.catas.get(&a.pred).ok_or_else(|| schema(name, format!("program atom `{a}` in a catamorphism body")))?;
        let (ains, aadt, aouts) = split_cata_atom(a, asig);
        let field = aadt
            .as_var()
            .filter(|v| fields.iter().any(|f| f.name == v.name))
            .ok_or_else(|| schema(name, format!("call `{a}` is not on an immediate subterm of `{pat}`")))?;
        if !calls.insert((a.pred.clone(), field.name.clone())) {
            return Err(schema(name, format!("`{}` is called twice on `{}`", a.pred, field.name)));
        }
        if a.pred == name {
            let same = ains.len() == ins.len() && ains.iter().zip(&ins).all(|(t, v)| t.as_var().is_some_and(|w| w.name == v.name));
            if !same {
                return Err(schema(name, format!("recursive call `{a}` must pass the inputs unchanged")));
            }
        } else {
            let mut vs = Vec::new();
            ains.iter().for_each(|t| t.collect_vars(&mut vs));
            if vs.iter().any(|v| !ins.iter().any(|i| i.name == v.name)) {
                return Err(schema(name, format!("auxiliary call `{a}` may only use the inputs")));
            }
        }
        for o in aouts {
            match o.as_var() {
                Some(v) if !known.contains(&v.name) => {
                    known.insert(v.name.clone());
                }
                _ => return Err(schema(name, format!("call `{a}` needs fresh output variables"))),
            }
        }
    }
    Ok(ctor.clone())
}

/// Checks the defining clauses of `name` against the fold schema: one clause per
/// constructor, recursive calls on immediate subterms with unchanged inputs,
/// auxiliary catamorphism calls on immediate subterms, and basic outputs.
pub fn validate_catamorphism(prog: &Program, name: &str) -> Result<CataDef> {
    let def = CataDef::collect(prog, name)?;
    if !def.sig.adt.is_adt() {
        return Err(schema(name, "the structural argument must have an ADT sort"));
    }
    if def.sig.outputs.is_empty() {
        return Err(schema(name, "at least one output is required"));
    }
    if let Some(s) = def.sig.inputs.iter().chain(&def.sig.outputs).find(|s| s.is_adt()) {
        return Err(schema(name, format!("inputs and outputs must be basic, found {s}")));
    }
    let ctors = prog.ctors_of(&def.sig.adt);
    let mut seen: BTreeMap<String, u32> = BTreeMap::new();
    for c in &def.clauses {
        let ctor = check_clause(prog, name, &def.sig, c)?;
        if let Some(prev) = seen.insert(ctor.clone(), c.id) {
            return Err(schema(name, format!("clauses {prev} and {} both handle `{ctor}`", c.id)));
        }
    }
    for (ctor, _) in &ctors {
        if !seen.contains_key(ctor) {
            return Err(schema(name, format!("missing case for constructor `{ctor}`")));
        }
    }
    Ok(def)
}

/// Validates every declared catamorphism and rejects cyclic dependencies.
/// Returned in dependency order: callees before callers.
pub fn validate_all(prog: &Program) -> Result<Vec<CataDef>> {
    let defs: BTreeMap<String, CataDef> =
        prog.catas.keys().map(|n| validate_catamorphism(prog, n).map(|d| (n.clone(), d))).collect::<Result<_>>()?;
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit(n: &str, defs: &BTreeMap<String, CataDef>, marks: &mut BTreeMap<String, Mark>, out: &mut Vec<CataDef>) -> Result<()> {
        match marks.get(n) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Active) => return Err(schema(n, "cyclic dependency between catamorphisms")),
            None => {}
        }
        marks.insert(n.into(), Mark::Active);
        for d in &defs[n].deps {
            visit(d, defs, marks, out)?;
        }
        marks.insert(n.into(), Mark::Done);
        out.push(defs[n].clone());
        Ok(())
    }
    let mut marks = BTreeMap::new();
    let mut out = Vec::new();
    for n in defs.keys() {
        visit(n, &defs, &mut marks, &mut out)?;
    }
    Ok(out)
}
