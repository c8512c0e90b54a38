use std::collections::HashSet;

use super::defs::Definition;
use super::trace::Rule;
use super::Transformer;
use crate::cata::split_cata_atom;
use crate::error::Result;
use crate::ir::subst::unify_lists;
use crate::ir::{normalize_clause, rename_apart, Clause, Constraint, RelOp, Substitution, Term};

fn ground_int(t: &Term) -> Option<i128> {
    match t {
        Term::Int(k) => Some(i128::from(*k)),
        Term::Lin(e) if e.coeffs.is_empty() => Some(i128::from(e.constant)),
        Term::Ite(c, a, b) => {
            if ground_bool(c)? {
                ground_int(a)
            } else {
                ground_int(b)
            }
        }
        _ => None,
    }
}

fn ground_bool(c: &Constraint) -> Option<bool> {
    Some(match c {
        Constraint::True => true,
        Constraint::False => false,
        Constraint::Rel(op, a, b) => {
            if let (Term::Bool(x), Term::Bool(y)) = (a, b) {
                return (*op == RelOp::Eq).then_some(x == y);
            }
            let (x, y) = (ground_int(a)?, ground_int(b)?);
            match op {
                RelOp::Eq => x == y,
                RelOp::Lt => x < y,
                RelOp::Le => x <= y,
                RelOp::Ge => x >= y,
                RelOp::Gt => x > y,
            }
        }
        Constraint::BoolVar(_) => return None,
        Constraint::Not(x) => !ground_bool(x)?,
        Constraint::And(a, b) => match (ground_bool(a), ground_bool(b)) {
            (Some(false), _) | (_, Some(false)) => false,
            (Some(true), Some(true)) => true,
            _ => return None,
        },
        Constraint::Or(a, b) => match (ground_bool(a), ground_bool(b)) {
            (Some(true), _) | (_, Some(true)) => true,
            (Some(false), Some(false)) => false,
            _ => return None,
        },
        Constraint::Implies(a, b) => match (ground_bool(a), ground_bool(b)) {
            (Some(false), _) | (_, Some(true)) => true,
            (Some(true), Some(false)) => false,
            _ => return None,
        },
        Constraint::Iff(a, b) => ground_bool(a)? == ground_bool(b)?,
        Constraint::Ite(x, a, b) => {
            if ground_bool(x)? {
                ground_bool(a)?
            } else {
                ground_bool(b)?
            }
        }
    })
}

/// Best-effort satisfiability filter: true only when some conjunct is a ground
/// constraint that evaluates to false.
pub(crate) fn trivially_unsat(c: &Clause) -> bool {
    c.constraints.iter().any(|k| ground_bool(k) == Some(false))
}

impl Transformer {
    /// One-step unfolding of the body atom at `idx` against every program clause
    /// whose head unifies with it.
    pub fn unf_one_step(&mut self, c: &Clause, idx: usize) -> Result<Vec<Clause>> {
        let atom = &c.body[idx];
        let taken: HashSet<String> = c.vars().into_iter().map(|v| v.name).collect();
        let candidates: Vec<Clause> = self.prog.clauses_for(&atom.pred).cloned().collect();
        let mut out = Vec::new();
        for k in candidates {
            let k = rename_apart(&k, &taken, &mut self.names);
            let head = k.head.atom().expect("definite clause");
            let Some(theta) = unify_lists(&atom.args, &head.args)? else { continue };
            let mut body = c.body[..idx].to_vec();
            body.extend(k.body.iter().cloned());
            body.extend(c.body[idx + 1..].iter().cloned());
            let mut constraints = c.constraints.clone();
            constraints.extend(k.constraints.iter().cloned());
            let r = theta.apply_clause(&Clause { id: 0, head: c.head.clone(), constraints, body });
            if trivially_unsat(&r) {
                continue;
            }
            let mut r = normalize_clause(&r, &mut self.names);
            r.id = self.names.next_clause_id();
            out.push(r);
        }
        Ok(out)
    }

    fn first_open_cata(&self, c: &Clause) -> Option<usize> {
        c.body.iter().position(|a| self.prog.catas.get(&a.pred).is_some_and(|sig| !matches!(split_cata_atom(a, sig).1, Term::Var(_))))
    }

    /// Merges catamorphism atoms that agree on inputs and ADT argument by
    /// identifying their outputs.
    pub(crate) fn apply_functionality(&self, c: &Clause) -> Clause {
        let mut c = c.clone();
        'outer: loop {
            for j in 0..c.body.len() {
                let Some(sig) = self.prog.catas.get(&c.body[j].pred) else { continue };
                for i in 0..j {
                    if c.body[i].pred != c.body[j].pred {
                        continue;
                    }
                    let (ia, ta, oa) = split_cata_atom(&c.body[i], sig);
                    let (ib, tb, ob) = split_cata_atom(&c.body[j], sig);
                    if ia != ib || ta != tb {
                        continue;
                    }
                    let mut s = Substitution::new();
                    let mut extra = Vec::new();
                    for (y1, y2) in oa.iter().zip(ob) {
                        let (y1, y2) = (s.apply_term(y1), s.apply_term(y2));
                        if y1 == y2 {
                            continue;
                        }
                        match (&y1, &y2) {
                            (_, Term::Var(v)) => s.bind(&v.name, y1.clone()),
                            (Term::Var(v), _) => s.bind(&v.name, y2.clone()),
                            _ => extra.push(Constraint::eq_terms(y1.clone(), y2.clone())),
                        }
                    }
                    c.body.remove(j);
                    c.constraints.extend(extra);
                    c = s.apply_clause(&c);
                    continue 'outer;
                }
            }
            return c;
        }
    }

    fn expand_catas(&mut self, c: Clause, out: &mut Vec<Clause>) -> Result<()> {
        match self.first_open_cata(&c) {
            None => out.push(c),
            Some(i) => {
                for n in self.unf_one_step(&c, i)? {
                    self.expand_catas(n, out)?;
                }
            }
        }
        Ok(())
    }

    /// Unfolds the program atom of `d`, then every catamorphism atom whose ADT
    /// argument is not a variable, then applies functionality.
    pub fn unfold_definition(&mut self, d: &Definition) -> Result<Vec<Clause>> {
        let dc = d.clause();
        let last = dc.body.len() - 1;
        let mut done = Vec::new();
        for c in self.unf_one_step(&dc, last)? {
            self.expand_catas(c, &mut done)?;
        }
        let out: Vec<Clause> = done
            .into_iter()
            .map(|c| {
                let mut m = normalize_clause(&self.apply_functionality(&c), &mut self.names);
                m.id = c.id;
                m
            })
            .collect();
        self.record(Rule::Unfold, vec![d.id], out.iter().map(|c| c.id).collect(), None);
        Ok(out)
    }
}
