use std::collections::{HashMap, HashSet};

use super::defs::DefSet;
use super::trace::Rule;
use super::Transformer;
use crate::cata::split_cata_atom;
use crate::error::{Error, Result};
use crate::ir::{Atom, Clause, Term};

fn bind(theta: &mut HashMap<String, Term>, from: &Term, to: &Term, what: &dyn Fn() -> String) -> Result<()> {
    let Some(v) = from.as_var() else {
        return if from == to { Ok(()) } else { Err(Error::Internal(format!("fold mismatch: {}", what()))) };
    };
    match theta.get(&v.name) {
        Some(prev) if prev != to => Err(Error::Internal(format!("fold conflict on `{}`: {}", v.name, what()))),
        Some(_) => Ok(()),
        None => {
            theta.insert(v.name.clone(), to.clone());
            Ok(())
        }
    }
}

impl Transformer {
    /// Replaces each program atom, together with the catamorphism atoms over its
    /// ADT variables, by the head of its definition.
    pub fn fold_clause(&mut self, c: &Clause, defs: &DefSet) -> Result<Clause> {
        let progs: Vec<&Atom> = c.body.iter().filter(|a| !self.prog.is_cata(&a.pred)).collect();
        let catas: Vec<&Atom> = c.body.iter().filter(|a| self.prog.is_cata(&a.pred)).collect();
        if progs.is_empty() && catas.is_empty() {
            return Ok(c.clone());
        }
        let mut used: HashSet<usize> = HashSet::new();
        let mut body = Vec::new();
        let mut def_ids = Vec::new();
        for a in progs {
            let d = defs.get(&a.pred).ok_or_else(|| Error::Internal(format!("no definition for `{}` when folding {c}", a.pred)))?;
            def_ids.push(d.id);
            let ctx = || format!("{c} with {}", d.clause());
            let mut theta: HashMap<String, Term> = HashMap::new();
            for (x, y) in d.prog.args.iter().zip(&a.args) {
                bind(&mut theta, x, y, &ctx)?;
            }
            let adt: Vec<String> = a.adt_vars().into_iter().map(|v| v.name).collect();
            for (i, f) in catas.iter().enumerate() {
                if !f.adt_vars().iter().any(|v| adt.contains(&v.name)) {
                    continue;
                }
                let sig = &self.prog.catas[&f.pred];
                let (_, ft, _) = split_cata_atom(f, sig);
                let g = d
                    .catas
                    .iter()
                    .find(|g| g.pred == f.pred && d.position_of(g, &self.prog.catas).is_some_and(|k| &a.args[k] == ft))
                    .ok_or_else(|| Error::Internal(format!("`{f}` has no counterpart in {}", d.clause())))?;
                for (x, y) in g.args.iter().zip(&f.args) {
                    bind(&mut theta, x, y, &ctx)?;
                }
                used.insert(i);
            }
            let args = d
                .head
                .args
                .iter()
                .map(|t| {
                    let v = t.as_var().expect("definition head");
                    theta.entry(v.name.clone()).or_insert_with(|| Term::Var(self.names.fresh_var(v.sort.clone()))).clone()
                })
                .collect();
            body.push(Atom::new(d.pred(), args));
        }
        if let Some((_, f)) = catas.iter().enumerate().find(|(i, _)| !used.contains(i)) {
            return Err(Error::Internal(format!("catamorphism atom `{f}` left after folding {c}")));
        }
        let out = Clause { id: self.names.next_clause_id(), head: c.head.clone(), constraints: c.constraints.clone(), body };
        let mut ins = vec![c.id];
        ins.extend(def_ids);
        self.record(Rule::Fold, ins, vec![out.id], None);
        Ok(out)
    }
}
