use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::ir::{Atom, CataSig, Program, Sort, Term, Var};

/// Catamorphisms attached to every value of one ADT sort, over a shared ADT variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CataAbstraction {
    pub sort: Sort,
    pub adt_var: Var,
    pub inputs: Vec<Var>,
    pub atoms: Vec<Atom>,
}

/// Catamorphism atoms to attach to each ADT argument of one program predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractionSpec {
    pub pred: String,
    pub head: Vec<Var>,
    pub inputs: Vec<Var>,
    pub atoms: Vec<Atom>,
}

pub type SpecMap = BTreeMap<String, AbstractionSpec>;

/// Splits a catamorphism atom into (inputs, adt argument, outputs).
pub fn split_cata_atom<'a>(a: &'a Atom, sig: &CataSig) -> (&'a [Term], &'a Term, &'a [Term]) {
    let k = sig.adt_pos();
    (&a.args[..k], &a.args[k], &a.args[k + 1..])
}

fn vars_only(ts: &[Term], what: &str, atom: &Atom) -> Result<Vec<Var>> {
    ts.iter().map(|t| t.as_var().cloned().ok_or_else(|| Error::Abstraction(format!("{what} of `{atom}` must be variables")))).collect()
}

/// Checks the shared shape of abstraction and spec bodies and returns the shared
/// input tuple: inputs are variables, outputs are distinct fresh variables, each
/// (predicate, ADT variable) pair occurs once.
fn check_body(atoms: &[Atom], catas: &BTreeMap<String, CataSig>, reserved: &HashSet<String>) -> Result<Vec<Var>> {
    let mut inputs: Vec<Var> = Vec::new();
    let mut outputs: HashSet<String> = HashSet::new();
    let mut pairs: HashSet<(String, String)> = HashSet::new();
    for a in atoms {
        let sig = catas.get(&a.pred).ok_or_else(|| Error::Abstraction(format!("`{}` is not a declared catamorphism", a.pred)))?;
        if a.args.len() != sig.arity() {
            return Err(Error::Abstraction(format!("`{a}` has the wrong number of arguments")));
        }
        let (ins, adt, outs) = split_cata_atom(a, sig);
        let adt = adt.as_var().ok_or_else(|| Error::Abstraction(format!("ADT argument of `{a}` must be a variable")))?;
        if !pairs.insert((a.pred.clone(), adt.name.clone())) {
            return Err(Error::Abstraction(format!("`{}` occurs twice on `{}`", a.pred, adt.name)));
        }
        for v in vars_only(ins, "inputs", a)? {
            if let Some(w) = inputs.iter().find(|w| w.name == v.name) {
                if w.sort != v.sort {
                    return Err(Error::Abstraction(format!("input `{}` used at two sorts", v.name)));
                }
            } else {
                inputs.push(v);
            }
        }
        for v in vars_only(outs, "outputs", a)? {
            if reserved.contains(&v.name) || !outputs.insert(v.name.clone()) {
                return Err(Error::Abstraction(format!("output `{}` of `{a}` is not fresh", v.name)));
            }
        }
    }
    if let Some(v) = inputs.iter().find(|v| outputs.contains(&v.name) || reserved.contains(&v.name)) {
        return Err(Error::Abstraction(format!("input `{}` clashes with another argument", v.name)));
    }
    Ok(inputs)
}

impl CataAbstraction {
    pub fn new(sort: Sort, atoms: Vec<Atom>, catas: &BTreeMap<String, CataSig>) -> Result<CataAbstraction> {
        if atoms.is_empty() {
            return Err(Error::Abstraction(format!("abstraction for {sort} is empty")));
        }
        let mut adt_var: Option<Var> = None;
        for a in &atoms {
            let sig = catas.get(&a.pred).ok_or_else(|| Error::Abstraction(format!("`{}` is not a declared catamorphism", a.pred)))?;
            if sig.adt != sort {
                return Err(Error::Abstraction(format!("`{}` acts on {}, not on {sort}", a.pred, sig.adt)));
            }
            let v = a.args.get(sig.adt_pos()).and_then(Term::as_var).cloned();
            match (&adt_var, v) {
                (_, None) => return Err(Error::Abstraction(format!("ADT argument of `{a}` must be a variable"))),
                (None, Some(v)) => adt_var = Some(v),
                (Some(w), Some(v)) if w.name != v.name => {
                    return Err(Error::Abstraction(format!("abstraction for {sort} uses two ADT variables")))
                }
                _ => {}
            }
        }
        let adt_var = adt_var.expect("nonempty");
        let reserved: HashSet<String> = [adt_var.name.clone()].into();
        let inputs = check_body(&atoms, catas, &reserved)?;
        Ok(CataAbstraction { sort, adt_var, inputs, atoms })
    }
}

impl AbstractionSpec {
    pub fn new(pred: &str, head: Vec<Var>, atoms: Vec<Atom>, catas: &BTreeMap<String, CataSig>) -> Result<AbstractionSpec> {
        let mut names = HashSet::new();
        if !head.iter().all(|v| names.insert(v.name.clone())) {
            return Err(Error::Abstraction(format!("spec head of `{pred}` repeats a variable")));
        }
        let inputs = check_body(&atoms, catas, &names)?;
        for a in &atoms {
            let sig = &catas[&a.pred];
            let (_, adt, _) = split_cata_atom(a, sig);
            let name = &adt.as_var().expect("checked").name;
            if !head.iter().any(|v| &v.name == name) {
                return Err(Error::Abstraction(format!("`{a}` is not over an argument of `{pred}`")));
            }
        }
        for v in head.iter().filter(|v| v.sort.is_adt()) {
            let covered = atoms.iter().any(|a| a.args[catas[&a.pred].adt_pos()].as_var().is_some_and(|w| w.name == v.name));
            if !covered {
                return Err(Error::Abstraction(format!("spec for `{pred}` has no catamorphism on `{}`", v.name)));
            }
        }
        Ok(AbstractionSpec { pred: pred.to_string(), head, inputs, atoms })
    }

    /// Atoms of the spec whose ADT argument is the head variable at `pos`.
    pub fn atoms_on(&self, pos: usize, catas: &BTreeMap<String, CataSig>) -> Vec<&Atom> {
        let name = &self.head[pos].name;
        self.atoms.iter().filter(|a| a.args[catas[&a.pred].adt_pos()].as_var().is_some_and(|v| &v.name == name)).collect()
    }
}

/// Builds the spec of every program predicate with ADT arguments. A `:- spec`
/// directive for a predicate wins over the generated one.
pub fn build_abstraction_specs(prog: &Program) -> Result<SpecMap> {
    let mut out = SpecMap::new();
    for user in &prog.user_specs {
        out.insert(user.pred.clone(), user.clone());
    }
    for p in prog.program_preds() {
        let sorts = &prog.preds[&p];
        if out.contains_key(&p) || !sorts.iter().any(Sort::is_adt) {
            continue;
        }
        out.insert(p.clone(), generate_spec(&p, sorts, prog)?);
    }
    Ok(out)
}

/// Spec of one predicate from the per-sort abstractions.
pub(crate) fn generate_spec(pred: &str, sorts: &[Sort], prog: &Program) -> Result<AbstractionSpec> {
    let mut taken: HashSet<String> = HashSet::new();
    for abs in &prog.abstractions {
        taken.extend(abs.inputs.iter().map(|v| v.name.clone()));
    }
    let fresh = |base: &str, k: usize, taken: &mut HashSet<String>| {
        let mut name = format!("{base}{k}");
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        name
    };
    let head: Vec<Var> = sorts.iter().enumerate().map(|(i, s)| Var::new(fresh("Z", i + 1, &mut taken), s.clone())).collect();
    let mut atoms = Vec::new();
    let mut out_counter = 0;
    for z in head.iter().filter(|v| v.sort.is_adt()) {
        let abs = prog
            .abstractions
            .iter()
            .find(|a| a.sort == z.sort)
            .ok_or_else(|| Error::Abstraction(format!("no catamorphic abstraction for sort {} (used by `{pred}`)", z.sort)))?;
        for a in &abs.atoms {
            let sig = &prog.catas[&a.pred];
            let (ins, _, outs) = split_cata_atom(a, sig);
            let mut args: Vec<Term> = ins.to_vec();
            args.push(Term::Var(z.clone()));
            for o in outs {
                out_counter += 1;
                let v = o.as_var().expect("checked");
                let base = v.name.trim_end_matches(|c: char| c.is_ascii_digit());
                let base = if base.is_empty() { "N" } else { base };
                args.push(Term::var(fresh(base, out_counter, &mut taken), v.sort.clone()));
            }
            atoms.push(Atom::new(a.pred.clone(), args));
        }
    }
    AbstractionSpec::new(pred, head, atoms, &prog.catas)
}

/// Renders a spec in directive form, e.g. `:- spec eq(Z1,Z2) ==> listcount(X,Z1,C1), listcount(X,Z2,C2).`
pub fn print_spec(s: &AbstractionSpec) -> String {
    let head = Atom::new(s.pred.clone(), s.head.iter().cloned().map(Term::Var).collect());
    let body: Vec<String> = s.atoms.iter().map(|a| a.to_string()).collect();
    format!(":- spec {head} ==> {}.", body.join(", "))
}
