use std::collections::HashMap;

use super::trace::Rule;
use super::Transformer;
use crate::cata::split_cata_atom;
use crate::error::{Error, Result};
use crate::ir::{Atom, Clause, Substitution, Term};

impl Transformer {
    /// Adds, for each program atom, the catamorphism atoms its spec requests that
    /// the body lacks. The spec's shared inputs are taken from the first already
    /// present atom they match, otherwise they are fresh. Atoms are visited in
    /// body order, except that an atom sharing an ADT variable with a present
    /// catamorphism atom goes before one that does not, so inputs propagate along
    /// chains of ADT variables instead of being split between fresh copies.
    pub fn add_catamorphisms(&mut self, c: &Clause) -> Result<Clause> {
        let (mut catas, progs): (Vec<Atom>, Vec<Atom>) = c.body.iter().cloned().partition(|a| self.prog.is_cata(&a.pred));
        let before = catas.len();
        let mut todo: Vec<&Atom> = progs.iter().filter(|a| !a.adt_vars().is_empty()).collect();
        while !todo.is_empty() {
            let touches = |a: &Atom| {
                let adt: Vec<String> = a.adt_vars().into_iter().map(|v| v.name).collect();
                catas.iter().any(|f| f.adt_vars().iter().any(|v| adt.contains(&v.name)))
            };
            let k = todo.iter().position(|a| touches(a)).unwrap_or(0);
            let a = todo.remove(k);
            let adt: Vec<String> = a.adt_vars().into_iter().map(|v| v.name).collect();
            let spec =
                self.spec_for(&a.pred)?.ok_or_else(|| Error::Abstraction(format!("no abstraction specification for `{}`", a.pred)))?;
            // Instantiate Z with the atom's arguments, inputs and outputs fresh.
            let mut inst = Substitution::new();
            for (z, t) in spec.head.iter().zip(&a.args) {
                inst.insert(&z.name, t.clone());
            }
            let mut spec_vars = Vec::new();
            spec.atoms.iter().for_each(|x| x.collect_vars(&mut spec_vars));
            for v in spec_vars.iter().filter(|v| !spec.head.iter().any(|z| z.name == v.name)) {
                inst.insert(&v.name, Term::Var(self.names.fresh_var(v.sort.clone())));
            }
            let wanted: Vec<Atom> = spec.atoms.iter().map(|x| inst.apply_atom(x)).collect();
            let present: Vec<&Atom> = catas.iter().filter(|f| f.adt_vars().iter().any(|v| adt.contains(&v.name))).collect();
            let mut theta: HashMap<String, Term> = HashMap::new();
            let mut missing = Vec::new();
            for w in &wanted {
                let sig = &self.prog.catas[&w.pred];
                let (wi, wt, _) = split_cata_atom(w, sig);
                let hit = present.iter().find(|f| f.pred == w.pred && split_cata_atom(f, sig).1 == wt);
                match hit {
                    Some(f) => {
                        let (fi, _, _) = split_cata_atom(f, sig);
                        for (x, y) in wi.iter().zip(fi) {
                            let Some(v) = x.as_var() else { continue };
                            match theta.get(&v.name) {
                                None => {
                                    theta.insert(v.name.clone(), y.clone());
                                }
                                Some(prev) if prev != y => {
                                    return Err(Error::Abstraction(format!(
                                        "clause {}: `{}` atoms over the arguments of `{a}` have different inputs `{prev}` and `{y}`; the specification of `{}` shares them",
                                        c.id, w.pred, a.pred
                                    )))
                                }
                                _ => {}
                            }
                        }
                    }
                    None => missing.push(w.clone()),
                }
            }
            let mut s = Substitution::new();
            for (k, t) in theta {
                s.insert(&k, t);
            }
            catas.extend(missing.iter().map(|m| s.apply_atom(m)));
        }
        if catas.len() == before {
            return Ok(c.clone());
        }
        let mut body = catas;
        body.extend(progs);
        let out = Clause { id: self.names.next_clause_id(), head: c.head.clone(), constraints: c.constraints.clone(), body };
        self.record(Rule::AddCata, vec![c.id], vec![out.id], None);
        Ok(out)
    }
}
