use std::collections::BTreeMap;

use thiserror::Error;

use super::term::{Atom, Clause, Constraint, Head, Sort, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("sort mismatch in unification: {0} vs {1}")]
    SortMismatch(Sort, Sort),
    #[error("arity mismatch in unification: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

/// Finite map from variable names to terms; kept idempotent by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    pub map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn single(name: &str, t: Term) -> Substitution {
        let mut s = Substitution::new();
        s.map.insert(name.to_string(), t);
        s
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.map.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn insert(&mut self, name: &str, t: Term) {
        self.map.insert(name.to_string(), t);
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(&v.name).cloned().unwrap_or_else(|| t.clone()),
            Term::Int(_) | Term::Bool(_) => t.clone(),
            Term::Ctor { name, args, sort } => {
                Term::Ctor { name: name.clone(), args: args.iter().map(|a| self.apply_term(a)).collect(), sort: sort.clone() }
            }
            Term::Lin(e) => {
                if !e.coeffs.keys().any(|v| self.map.contains_key(v)) {
                    return t.clone();
                }
                let mut acc = Term::Int(e.constant);
                for (v, c) in &e.coeffs {
                    let image = self.map.get(v).cloned().unwrap_or_else(|| Term::int_var(v.clone()));
                    acc = Term::add(&acc, &Term::scale(*c, &image));
                }
                acc
            }
            Term::Ite(c, a, b) => Term::Ite(Box::new(self.apply_constraint(c)), Box::new(self.apply_term(a)), Box::new(self.apply_term(b))),
        }
    }

    pub fn apply_constraint(&self, c: &Constraint) -> Constraint {
        let bx = |x: &Constraint| Box::new(self.apply_constraint(x));
        match c {
            Constraint::Rel(op, a, b) => Constraint::Rel(*op, self.apply_term(a), self.apply_term(b)),
            Constraint::BoolVar(n) => match self.map.get(n) {
                Some(t) => Constraint::from_bool_term(t),
                None => c.clone(),
            },
            Constraint::True | Constraint::False => c.clone(),
            Constraint::Not(x) => Constraint::Not(bx(x)),
            Constraint::And(a, b) => Constraint::And(bx(a), bx(b)),
            Constraint::Or(a, b) => Constraint::Or(bx(a), bx(b)),
            Constraint::Implies(a, b) => Constraint::Implies(bx(a), bx(b)),
            Constraint::Iff(a, b) => Constraint::Iff(bx(a), bx(b)),
            Constraint::Ite(x, a, b) => Constraint::Ite(bx(x), bx(a), bx(b)),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom { pred: a.pred.clone(), args: a.args.iter().map(|t| self.apply_term(t)).collect() }
    }

    /// Rewrites every component of the clause; no renormalization.
    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause {
            id: c.id,
            head: match &c.head {
                Head::False => Head::False,
                Head::Atom(a) => Head::Atom(self.apply_atom(a)),
            },
            constraints: c.constraints.iter().map(|x| self.apply_constraint(x)).collect(),
            body: c.body.iter().map(|a| self.apply_atom(a)).collect(),
        }
    }

    /// Adds `name -> t` and rewrites existing images so the map stays idempotent.
    pub fn bind(&mut self, name: &str, t: Term) {
        let single = Substitution::single(name, t.clone());
        for v in self.map.values_mut() {
            *v = single.apply_term(v);
        }
        self.map.insert(name.to_string(), t);
    }
}

fn occurs(name: &str, t: &Term) -> bool {
    let mut vs = Vec::new();
    t.collect_vars(&mut vs);
    vs.iter().any(|v| v.name == name)
}

fn unify_into(s: &mut Substitution, a: &Term, b: &Term) -> Result<bool, UnifyError> {
    let (sa, sb) = (a.sort(), b.sort());
    if sa != sb {
        return Err(UnifyError::SortMismatch(sa, sb));
    }
    let a = s.apply_term(a);
    let b = s.apply_term(b);
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x.name == y.name => Ok(true),
        (_, Term::Var(y)) => {
            if occurs(&y.name, &a) {
                return Ok(false);
            }
            s.bind(&y.name, a.clone());
            Ok(true)
        }
        (Term::Var(x), _) => {
            if occurs(&x.name, &b) {
                return Ok(false);
            }
            s.bind(&x.name, b.clone());
            Ok(true)
        }
        (Term::Ctor { name: f, args: xs, .. }, Term::Ctor { name: g, args: ys, .. }) => {
            if f != g || xs.len() != ys.len() {
                return Ok(false);
            }
            for (x, y) in xs.iter().zip(ys) {
                if !unify_into(s, x, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(a == b),
    }
}

/// Most general unifier with occurs check. A variable on the right is bound to the
/// left term, so `unify(B, Xs)` yields `{Xs -> B}`. Non-constructor basic terms
/// unify only when syntactically equal.
pub fn unify(t1: &Term, t2: &Term) -> Result<Option<Substitution>, UnifyError> {
    let mut s = Substitution::new();
    Ok(unify_into(&mut s, t1, t2)?.then_some(s))
}

pub fn unify_lists(xs: &[Term], ys: &[Term]) -> Result<Option<Substitution>, UnifyError> {
    if xs.len() != ys.len() {
        return Err(UnifyError::ArityMismatch(xs.len(), ys.len()));
    }
    let mut s = Substitution::new();
    for (x, y) in xs.iter().zip(ys) {
        if !unify_into(&mut s, x, y)? {
            return Ok(None);
        }
    }
    Ok(Some(s))
}

/// Unifies two atoms; different predicates simply do not unify.
pub fn unify_atoms(a: &Atom, b: &Atom) -> Result<Option<Substitution>, UnifyError> {
    if a.pred != b.pred {
        return Ok(None);
    }
    unify_lists(&a.args, &b.args)
}
