use std::collections::{HashMap, HashSet};

use super::names::NameSupply;
use super::term::{Atom, Clause, Constraint, Head, Sort, Term, Var};

/// Rewrites body atoms so their basic-sorted arguments are pairwise distinct variables:
/// each offending argument becomes a fresh variable plus an equality in the constraint.
///
/// ADT-sorted arguments are left untouched. An ADT equality has no constraint
/// encoding, so the frontend removes constructor terms and repeated ADT variables
/// from bodies before this runs, and the transformation keeps ADT bindings in the
/// substitution instead.
pub fn normalize_clause(c: &Clause, supply: &mut NameSupply) -> Clause {
    let mut out = c.clone();
    let mut extra = Vec::new();
    for atom in &mut out.body {
        let mut seen: HashSet<String> = HashSet::new();
        for arg in &mut atom.args {
            let sort = arg.sort();
            if sort.is_adt() {
                continue;
            }
            let keep = match arg {
                Term::Var(v) => seen.insert(v.name.clone()),
                _ => false,
            };
            if !keep {
                let fresh = Term::Var(supply.fresh_var(sort));
                extra.push(Constraint::eq_terms(fresh.clone(), arg.clone()));
                if let Term::Var(v) = &fresh {
                    seen.insert(v.name.clone());
                }
                *arg = fresh;
            }
        }
    }
    out.constraints.extend(extra);
    out
}

/// Replaces basic-sorted non-variable subterms of the head, including those under
/// constructors, by fresh variables with equalities. After this, unifying a head
/// with a body atom is purely syntactic over variables and constructors.
pub fn flatten_head(c: &Clause, supply: &mut NameSupply) -> Clause {
    let Head::Atom(h) = &c.head else {
        return c.clone();
    };
    fn walk(t: &Term, supply: &mut NameSupply, extra: &mut Vec<Constraint>) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::Ctor { name, args, sort } => {
                Term::Ctor { name: name.clone(), args: args.iter().map(|a| walk(a, supply, extra)).collect(), sort: sort.clone() }
            }
            other => {
                let fresh = Term::Var(supply.fresh_var(other.sort()));
                extra.push(Constraint::eq_terms(fresh.clone(), other.clone()));
                fresh
            }
        }
    }
    let mut extra = Vec::new();
    let args = h.args.iter().map(|a| walk(a, supply, &mut extra)).collect();
    let mut out = c.clone();
    out.head = Head::Atom(Atom { pred: h.pred.clone(), args });
    out.constraints.extend(extra);
    out
}

/// Renames the variables of `c` that clash with `taken` to fresh names.
pub fn rename_apart(c: &Clause, taken: &HashSet<String>, supply: &mut NameSupply) -> Clause {
    let mut map: HashMap<String, String> = HashMap::new();
    for v in c.vars() {
        if taken.contains(&v.name) {
            map.insert(v.name.clone(), supply.fresh_var_name());
        }
    }
    rename_vars(c, &map)
}

/// Renames every variable of `c` to a fresh name.
pub fn rename_all(c: &Clause, supply: &mut NameSupply) -> Clause {
    let map: HashMap<String, String> = c.vars().into_iter().map(|v| (v.name, supply.fresh_var_name())).collect();
    rename_vars(c, &map)
}

/// Applies a variable-to-variable renaming given by name.
pub fn rename_vars(c: &Clause, map: &HashMap<String, String>) -> Clause {
    let mut s = super::subst::Substitution::new();
    for v in c.vars() {
        if let Some(n) = map.get(&v.name) {
            s.insert(&v.name, Term::Var(Var::new(n.clone(), v.sort.clone())));
        }
    }
    s.apply_clause(c)
}

/// Sort of `name` as recorded in the clause, if it occurs.
pub fn sort_of(c: &Clause, name: &str) -> Option<Sort> {
    c.vars().into_iter().find(|v| v.name == name).map(|v| v.sort)
}
