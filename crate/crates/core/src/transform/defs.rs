use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::cata::split_cata_atom;
use crate::error::{Error, Result};
use crate::ir::{canonical_clause, Atom, CataSig, Clause, Head, NameSupply, Substitution, Term, Var};

/// A definition `newp(U) <- Catas, A` pairing a program atom with catamorphism
/// atoms over its ADT variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub id: u32,
    pub head: Atom,
    pub catas: Vec<Atom>,
    pub prog: Atom,
}

impl Definition {
    /// Builds the definition with head arguments `vars(Catas, A)` in first-occurrence order.
    pub fn new(id: u32, pred: impl Into<String>, catas: Vec<Atom>, prog: Atom) -> Definition {
        let mut vars: Vec<Var> = Vec::new();
        catas.iter().chain(std::iter::once(&prog)).for_each(|a| a.collect_vars(&mut vars));
        let head = Atom::new(pred, vars.into_iter().map(Term::Var).collect());
        Definition { id, head, catas, prog }
    }

    pub fn pred(&self) -> &str {
        &self.head.pred
    }

    pub fn program_pred(&self) -> &str {
        &self.prog.pred
    }

    pub fn clause(&self) -> Clause {
        let mut body = self.catas.clone();
        body.push(self.prog.clone());
        Clause { id: self.id, ..Clause::new(Head::Atom(self.head.clone()), vec![], body) }
    }

    pub fn canonical(&self, catas: &BTreeMap<String, CataSig>) -> String {
        canonical_clause(&self.clause(), &|p| catas.contains_key(p))
    }

    /// Position, among the program atom's arguments, of the ADT argument of `a`.
    pub fn position_of(&self, a: &Atom, catas: &BTreeMap<String, CataSig>) -> Option<usize> {
        let (_, adt, _) = split_cata_atom(a, &catas[&a.pred]);
        self.prog.args.iter().position(|t| t == adt)
    }

    /// Catamorphism atoms identified by predicate and argument position.
    pub fn keys(&self, catas: &BTreeMap<String, CataSig>) -> BTreeSet<(String, usize)> {
        self.catas.iter().filter_map(|a| self.position_of(a, catas).map(|k| (a.pred.clone(), k))).collect()
    }

    /// Checks the shape conditions: program-atom arguments are distinct variables,
    /// every catamorphism atom is over one of them, and no (predicate, argument)
    /// pair occurs twice.
    pub fn check(&self, catas: &BTreeMap<String, CataSig>) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(format!("definition {}: {m}", self.clause())));
        let mut seen = HashSet::new();
        for t in &self.prog.args {
            match t.as_var() {
                Some(v) if seen.insert(v.name.clone()) => {}
                _ => return fail("program atom arguments are not distinct variables".into()),
            }
        }
        let mut keys = HashSet::new();
        for a in &self.catas {
            match self.position_of(a, catas) {
                None => return fail(format!("`{a}` is not over an argument of the program atom")),
                Some(k) if !keys.insert((a.pred.clone(), k)) => return fail(format!("two `{}` atoms on one argument", a.pred)),
                _ => {}
            }
        }
        Ok(())
    }
}

/// A monovariant set of definitions, in introduction order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefSet {
    defs: Vec<Definition>,
}

impl DefSet {
    pub fn new() -> DefSet {
        DefSet::default()
    }

    pub fn from_defs(defs: Vec<Definition>) -> DefSet {
        DefSet { defs }
    }

    pub fn get(&self, program_pred: &str) -> Option<&Definition> {
        self.defs.iter().find(|d| d.program_pred() == program_pred)
    }

    pub fn by_head(&self, pred: &str) -> Option<&Definition> {
        self.defs.iter().find(|d| d.pred() == pred)
    }

    /// Inserts `d`, replacing the definition for the same program predicate in place.
    pub fn put(&mut self, d: Definition) {
        match self.defs.iter().position(|e| e.program_pred() == d.program_pred()) {
            Some(i) => self.defs[i] = d,
            None => self.defs.push(d),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Definition> {
        self.defs.iter()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn canonical_set(&self, catas: &BTreeMap<String, CataSig>) -> BTreeSet<String> {
        self.defs.iter().map(|d| d.canonical(catas)).collect()
    }

    /// Same definitions up to equivalence.
    pub fn equivalent(&self, other: &DefSet, catas: &BTreeMap<String, CataSig>) -> bool {
        self.canonical_set(catas) == other.canonical_set(catas)
    }

    /// Monovariance, shape of each definition, and pairwise non-equivalence.
    pub fn check_invariants(&self, catas: &BTreeMap<String, CataSig>) -> Result<()> {
        let mut preds = HashSet::new();
        let mut canon = HashSet::new();
        for d in &self.defs {
            if !preds.insert(d.program_pred()) {
                return Err(Error::Internal(format!("two definitions for `{}`", d.program_pred())));
            }
            d.check(catas)?;
            if !canon.insert(d.canonical(catas)) {
                return Err(Error::Internal(format!("equivalent definitions: {}", d.clause())));
            }
        }
        Ok(())
    }
}

/// Renaming of `d2`'s variables onto `d1`'s: program-atom arguments by position,
/// inputs and outputs of catamorphism atoms with a common key by position, other
/// inputs from an atom of the same predicate, anything else fresh.
fn align(d1: &Definition, d2: &Definition, catas: &BTreeMap<String, CataSig>, names: &mut NameSupply) -> Substitution {
    let mut map: HashMap<String, Term> = HashMap::new();
    for (a, b) in d2.prog.args.iter().zip(&d1.prog.args) {
        if let Some(v) = a.as_var() {
            map.insert(v.name.clone(), b.clone());
        }
    }
    let key1: HashMap<(String, usize), &Atom> =
        d1.catas.iter().filter_map(|a| d1.position_of(a, catas).map(|k| ((a.pred.clone(), k), a))).collect();
    for a in &d2.catas {
        let Some(k) = d2.position_of(a, catas) else { continue };
        if let Some(b) = key1.get(&(a.pred.clone(), k)) {
            let sig = &catas[&a.pred];
            let (ia, _, oa) = split_cata_atom(a, sig);
            let (ib, _, ob) = split_cata_atom(b, sig);
            for (x, y) in ia.iter().zip(ib).chain(oa.iter().zip(ob)) {
                if let Some(v) = x.as_var() {
                    map.entry(v.name.clone()).or_insert_with(|| y.clone());
                }
            }
        }
    }
    // Atoms on new keys take the inputs of a same-predicate atom of `d1`, since
    // specs share inputs across all atoms of one catamorphism.
    for a in &d2.catas {
        if let Some(b) = d1.catas.iter().find(|b| b.pred == a.pred) {
            let sig = &catas[&a.pred];
            let (ia, _, _) = split_cata_atom(a, sig);
            let (ib, _, _) = split_cata_atom(b, sig);
            for (x, y) in ia.iter().zip(ib) {
                if let Some(v) = x.as_var() {
                    map.entry(v.name.clone()).or_insert_with(|| y.clone());
                }
            }
        }
    }
    let mut s = Substitution::new();
    for v in d2.clause().vars() {
        let t = map.remove(&v.name).unwrap_or_else(|| Term::Var(names.fresh_var(v.sort.clone())));
        s.insert(&v.name, t);
    }
    s
}

/// `d1 ⊑ d2`: same program predicate, and every catamorphism of `d1` has a
/// counterpart in `d2` on the same argument.
pub fn def_leq(d1: &Definition, d2: &Definition, catas: &BTreeMap<String, CataSig>) -> bool {
    d1.program_pred() == d2.program_pred() && d1.keys(catas).is_subset(&d2.keys(catas))
}

/// `d1 ⊔ d2`: the atoms of `d1` plus those of `d2` on new keys, under a fresh head.
pub fn def_join(
    d1: &Definition,
    d2: &Definition,
    catas: &BTreeMap<String, CataSig>,
    names: &mut NameSupply,
    id: u32,
    pred: &str,
) -> Definition {
    let s = align(d1, d2, catas, names);
    let keys = d1.keys(catas);
    let mut out = d1.catas.clone();
    for a in &d2.catas {
        if d2.position_of(a, catas).is_some_and(|k| !keys.contains(&(a.pred.clone(), k))) {
            out.push(s.apply_atom(a));
        }
    }
    Definition::new(id, pred, out, d1.prog.clone())
}

/// `d1 ⊓ d2`: the atoms of `d1` whose key also occurs in `d2`.
pub fn def_meet(d1: &Definition, d2: &Definition, catas: &BTreeMap<String, CataSig>, id: u32, pred: &str) -> Definition {
    let keys = d2.keys(catas);
    let out = d1.catas.iter().filter(|a| d1.position_of(a, catas).is_some_and(|k| keys.contains(&(a.pred.clone(), k)))).cloned().collect();
    Definition::new(id, pred, out, d1.prog.clone())
}

/// Pointwise order on definition sets.
pub fn defset_leq(a: &DefSet, b: &DefSet, catas: &BTreeMap<String, CataSig>) -> bool {
    a.iter().all(|d| b.get(d.program_pred()).is_some_and(|e| def_leq(d, e, catas)))
}
