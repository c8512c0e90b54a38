use super::defs::{def_join, def_leq, DefSet, Definition};
use super::trace::Rule;
use super::Transformer;
use crate::error::Result;
use crate::ir::{Atom, Clause};

impl Transformer {
    fn new_pred_name(&mut self, program_pred: &str) -> String {
        if self.readable_names {
            let base: String =
                format!("new_{program_pred}").chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
            self.names.readable_pred(base.trim_end_matches('_'))
        } else {
            self.names.fresh_pred("new")
        }
    }

    /// Catamorphism atoms of `c` over ADT variables of `a`, in reverse body order.
    fn catas_for(&self, c: &Clause, a: &Atom) -> Vec<Atom> {
        let adt: Vec<String> = a.adt_vars().into_iter().map(|v| v.name).collect();
        c.body
            .iter()
            .rev()
            .filter(|f| self.prog.is_cata(&f.pred))
            .filter(|f| {
                let vs = f.adt_vars();
                !vs.is_empty() && vs.iter().all(|v| adt.contains(&v.name))
            })
            .cloned()
            .collect()
    }

    /// Adds a definition for every program atom without one, and extends the
    /// definitions whose catamorphisms do not cover an occurrence.
    pub fn define(&mut self, cls: &[Clause], defs: &DefSet) -> Result<DefSet> {
        let mut out = defs.clone();
        for c in cls {
            let progs: Vec<Atom> = c.body.iter().filter(|a| !self.prog.is_cata(&a.pred)).cloned().collect();
            for a in &progs {
                let cand = Definition::new(0, "", self.catas_for(c, a), a.clone());
                match out.get(&a.pred) {
                    Some(d) if def_leq(&cand, d, &self.prog.catas) => {}
                    Some(d) => {
                        let d = d.clone();
                        let pred = self.new_pred_name(&a.pred);
                        let id = self.names.next_clause_id();
                        let ext = def_join(&d, &cand, &self.prog.catas, &mut self.names, id, &pred);
                        self.record(Rule::Define, vec![c.id, d.id], vec![ext.id], Some(format!("extend {}", d.pred())));
                        out.put(ext);
                    }
                    None => {
                        let pred = self.new_pred_name(&a.pred);
                        let id = self.names.next_clause_id();
                        let d = Definition::new(id, pred, cand.catas, cand.prog);
                        self.record(Rule::Define, vec![c.id], vec![d.id], None);
                        out.put(d);
                    }
                }
            }
        }
        out.check_invariants(&self.prog.catas)?;
        Ok(out)
    }
}
