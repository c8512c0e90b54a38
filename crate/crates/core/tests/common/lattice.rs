//! Generators for definitions and definition sets, and the order, join, meet,
//! canonical-form, and monotonicity laws checked on them.

use std::collections::{BTreeMap, HashMap};

use catachc::ir::normalize::rename_vars;
use catachc::ir::{canonical_clause, Atom, CataSig, Clause, Head, NameSupply, Sort, Substitution, Term, Var};
use catachc::pipeline::{prepare, PipelineOptions, Prepared};
use catachc::transform::{def_join, def_leq, def_meet, defset_leq, DefSet, Definition, TransformOptions, Transformer};
use proptest::prelude::*;
use proptest::sample::subsequence;

pub const SRC: &str = "
:- cata listcount(in:int, adt:list(int), out:int).
:- cata size(adt:list(int), out:int).
:- cata_abs list(int) ==> listcount(X, L, N), size(L, M).
:- pred p(list(int), list(int), list(int)).
p([],[],[]).
listcount(X,[],N) :- N=0.
listcount(X,[H|T],N) :- N=ite(X=H,NT+1,NT), listcount(X,T,NT).
size([],N) :- N=0.
size([H|T],N) :- N=S+1, size(T,S).
";

pub fn catas() -> BTreeMap<String, CataSig> {
    prepare(SRC, &PipelineOptions::default()).unwrap().program.catas
}

/// A definition of `p` with the catamorphism atoms on the chosen keys, body atoms
/// in the given order, and variables named with `tag`.
pub fn definition(keys: &[(bool, usize)], order: &[usize], tag: &str, id: u32) -> Definition {
    let l = |k: usize| Term::var(format!("{tag}L{k}"), catachc::ir::Sort::list_int());
    let x = Term::int_var(format!("{tag}X"));
    let mut atoms: Vec<Atom> = keys
        .iter()
        .map(|&(count, k)| {
            let out = Term::int_var(format!("{tag}N{}{k}", if count { "c" } else { "s" }));
            if count {
                Atom::new("listcount", vec![x.clone(), l(k), out])
            } else {
                Atom::new("size", vec![l(k), out])
            }
        })
        .collect();
    let mut permuted = Vec::new();
    for &i in order {
        if i < atoms.len() {
            permuted.push(atoms[i].clone());
        }
    }
    atoms.retain(|a| !permuted.contains(a));
    permuted.extend(atoms);
    Definition::new(id, format!("d{id}"), permuted, Atom::new("p", (0..3).map(l).collect()))
}

pub fn all_keys() -> Vec<(bool, usize)> {
    [true, false].into_iter().flat_map(|c| (0..3).map(move |k| (c, k))).collect()
}

pub fn def_strategy(tag: &'static str, id: u32) -> impl Strategy<Value = Definition> {
    (subsequence(all_keys(), 0..=6), Just((0..6).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(move |(keys, order)| definition(&keys, &order, tag, id))
}

pub fn equiv(a: &Definition, b: &Definition, c: &BTreeMap<String, CataSig>) -> bool {
    a.canonical(c) == b.canonical(c)
}

pub fn bench(name: &str) -> Prepared {
    let path = format!("{}/../../benchmarks/{name}.chc", env!("CARGO_MANIFEST_DIR"));
    prepare(&std::fs::read_to_string(path).unwrap(), &PipelineOptions::default()).unwrap()
}

/// Definitions for a subset of the program predicates, each with a subset of the
/// atoms its spec requests. `keep` decides membership for every candidate.
pub fn def_set(prep: &Prepared, keep: &mut dyn FnMut() -> bool, tag: &str) -> (DefSet, Vec<(String, Vec<usize>)>) {
    let mut defs = Vec::new();
    let mut shape = Vec::new();
    let mut id = 1000;
    for (pred, spec) in &prep.specs {
        if !keep() {
            continue;
        }
        let mut s = Substitution::new();
        let args: Vec<Term> = spec
            .head
            .iter()
            .map(|z| {
                let v = Term::Var(Var::new(format!("{tag}{}{}", pred, z.name), z.sort.clone()));
                s.insert(&z.name, v.clone());
                v
            })
            .collect();
        let mut spec_vars = Vec::new();
        spec.atoms.iter().for_each(|a| a.collect_vars(&mut spec_vars));
        for v in spec_vars.iter().filter(|v| !spec.head.iter().any(|z| z.name == v.name)) {
            s.insert(&v.name, Term::Var(Var::new(format!("{tag}{pred}_{}", v.name), v.sort.clone())));
        }
        let chosen: Vec<usize> = (0..spec.atoms.len()).filter(|_| keep()).collect();
        let atoms = chosen.iter().map(|&i| s.apply_atom(&spec.atoms[i])).collect();
        id += 1;
        defs.push(Definition::new(id, format!("{tag}{id}"), atoms, Atom::new(pred.clone(), args)));
        shape.push((pred.clone(), chosen));
    }
    (DefSet::from_defs(defs), shape)
}

/// A sub-selection of `shape`: some definitions dropped, some atoms dropped.
pub fn restrict(prep: &Prepared, shape: &[(String, Vec<usize>)], keep: &mut dyn FnMut() -> bool) -> DefSet {
    let mut defs = Vec::new();
    for (n, (pred, chosen)) in shape.iter().enumerate() {
        if !keep() {
            continue;
        }
        let sub: Vec<usize> = chosen.iter().copied().filter(|_| keep()).collect();
        let spec = &prep.specs[pred];
        let mut s = Substitution::new();
        let args: Vec<Term> = spec
            .head
            .iter()
            .map(|z| {
                let v = Term::Var(Var::new(format!("s{pred}{}", z.name), z.sort.clone()));
                s.insert(&z.name, v.clone());
                v
            })
            .collect();
        let mut spec_vars = Vec::new();
        spec.atoms.iter().for_each(|a| a.collect_vars(&mut spec_vars));
        for v in spec_vars.iter().filter(|v| !spec.head.iter().any(|z| z.name == v.name)) {
            s.insert(&v.name, Term::Var(Var::new(format!("s{pred}_{}", v.name), v.sort.clone())));
        }
        let atoms = sub.iter().map(|&i| s.apply_atom(&spec.atoms[i])).collect();
        defs.push(Definition::new(500 + n as u32, format!("s{n}"), atoms, Atom::new(pred.clone(), args)));
    }
    DefSet::from_defs(defs)
}

/// `⊔` is commutative, associative, and idempotent up to canonical equality.
pub fn join_laws(a: &Definition, b: &Definition, c: &Definition) -> Result<(), String> {
    let cs = catas();
    let mut ns = NameSupply::new();
    let j = |x: &Definition, y: &Definition, ns: &mut NameSupply| def_join(x, y, &cs, ns, 9, "j");
    let ab = j(a, b, &mut ns);
    let ba = j(b, a, &mut ns);
    if !equiv(&ab, &ba, &cs) {
        return Err(format!("join not commutative: {} vs {}", ab.clause(), ba.clause()));
    }
    let left = {
        let t = j(a, b, &mut ns);
        j(&t, c, &mut ns)
    };
    let right = {
        let t = j(b, c, &mut ns);
        j(a, &t, &mut ns)
    };
    if !equiv(&left, &right, &cs) {
        return Err(format!("join not associative: {} vs {}", left.clause(), right.clause()));
    }
    if !equiv(&j(a, a, &mut ns), a, &cs) {
        return Err(format!("join not idempotent on {}", a.clause()));
    }
    Ok(())
}

/// Join is an upper bound, meet a commutative lower bound, and absorption holds.
pub fn bound_laws(a: &Definition, b: &Definition) -> Result<(), String> {
    let cs = catas();
    let mut ns = NameSupply::new();
    let ab = def_join(a, b, &cs, &mut ns, 9, "j");
    if !(def_leq(a, &ab, &cs) && def_leq(b, &ab, &cs)) {
        return Err(format!("join {} is not an upper bound", ab.clause()));
    }
    let m = def_meet(a, b, &cs, 9, "m");
    if !(def_leq(&m, a, &cs) && def_leq(&m, b, &cs)) {
        return Err(format!("meet {} is not a lower bound", m.clause()));
    }
    if !equiv(&m, &def_meet(b, a, &cs, 9, "m"), &cs) {
        return Err("meet not commutative".into());
    }
    if !equiv(&def_join(a, &m, &cs, &mut ns, 9, "j"), a, &cs) || !equiv(&def_meet(a, &ab, &cs, 9, "m"), a, &cs) {
        return Err(format!("absorption fails for {} and {}", a.clause(), b.clause()));
    }
    Ok(())
}

/// `⊑` is reflexive and antisymmetric, and `a ⊑ b` implies `a ⊔ b ≡ b`.
pub fn order_laws(a: &Definition, b: &Definition) -> Result<(), String> {
    let cs = catas();
    let mut ns = NameSupply::new();
    if !def_leq(a, a, &cs) {
        return Err(format!("order not reflexive on {}", a.clause()));
    }
    if def_leq(a, b, &cs) {
        if !equiv(&def_join(a, b, &cs, &mut ns, 9, "j"), b, &cs) {
            return Err("a below b but a join b differs from b".into());
        }
        if def_leq(b, a, &cs) && !equiv(a, b, &cs) {
            return Err("order not antisymmetric".into());
        }
    }
    Ok(())
}

/// Draws `n` comparable pairs of definition sets over corpus programs and checks
/// that one application of the definition operator preserves their order.
pub fn monotone_pairs(n: usize, seed: u64) -> Result<usize, String> {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let programs: Vec<Prepared> = ["double", "reverse", "insertionsort", "treesort", "quicksortc"].iter().map(|n| bench(n)).collect();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut checked = 0;
    for i in 0..n {
        let prep = &programs[i % programs.len()];
        let cs = &prep.program.catas;
        let (big, shape) = def_set(prep, &mut || rng.gen_bool(0.6), "b");
        let small = restrict(prep, &shape, &mut || rng.gen_bool(0.6));
        if !defset_leq(&small, &big, cs) {
            return Err(format!("pair {i} is not comparable"));
        }
        let step = |d: &DefSet| -> Result<DefSet, String> {
            let mut t = Transformer::new(&prep.program, &prep.specs, TransformOptions::default()).map_err(|e| e.to_string())?;
            Ok(t.tau_step(d).map_err(|e| format!("pair {i}: {e}"))?.0)
        };
        let (ts, tb) = (step(&small)?, step(&big)?);
        ts.check_invariants(cs).map_err(|e| format!("pair {i}: {e}"))?;
        tb.check_invariants(cs).map_err(|e| format!("pair {i}: {e}"))?;
        if !defset_leq(&ts, &tb, cs) {
            return Err(format!("pair {i}: the operator is not monotone"));
        }
        checked += 1;
    }
    Ok(checked)
}

// Canonical forms of the four definitions of the `double` fixpoint under every
// permutation of the body atoms and a renaming of all variables.

pub fn lc(x: &str, l: &str, n: &str) -> Atom {
    Atom::new("listcount", vec![Term::int_var(x), Term::var(l, Sort::list_int()), Term::int_var(n)])
}

pub fn lv(n: &str) -> Term {
    Term::var(n, Sort::list_int())
}

pub fn definition_clause(head: &str, body: Vec<Atom>) -> Clause {
    let mut vars = Vec::new();
    body.iter().for_each(|a| a.collect_vars(&mut vars));
    Clause::new(Head::Atom(Atom::new(head, vars.into_iter().map(Term::Var).collect())), vec![], body)
}

pub fn double_definitions() -> Vec<Clause> {
    vec![
        definition_clause("new1", vec![lc("A", "B", "C"), lc("A", "E", "F"), Atom::new("double", vec![lv("B"), lv("E")])]),
        definition_clause(
            "new2",
            vec![lc("A", "B", "C"), lc("A", "E", "F"), lc("A", "H", "I"), Atom::new("append", vec![lv("H"), lv("B"), lv("E")])],
        ),
        definition_clause("new3", vec![lc("A", "B", "C"), lc("A", "E", "F"), Atom::new("eq", vec![lv("E"), lv("B")])]),
        definition_clause("new4", vec![lc("A", "B", "C"), Atom::new("true_list_int", vec![lv("B")])]),
    ]
}

pub fn permutations<T: Clone>(xs: &[T]) -> Vec<Vec<T>> {
    if xs.len() <= 1 {
        return vec![xs.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

pub fn is_listcount(p: &str) -> bool {
    p == "listcount"
}

/// Canonical forms of the `double` definitions are unchanged by every permutation
/// of body atoms, a variable renaming, and a reordered head, and stay pairwise
/// distinct. Returns the number of variants checked.
pub fn canonical_permutation_check() -> Result<usize, String> {
    let renaming: HashMap<String, String> = ["A", "B", "C", "E", "F", "H", "I"]
        .iter()
        .zip(["Q", "W", "R", "T", "Y", "U", "P"])
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let defs = double_definitions();
    let canon: Vec<String> = defs.iter().map(|d| canonical_clause(d, &is_listcount)).collect();
    let mut n = 0;
    for (d, expected) in defs.iter().zip(&canon) {
        for perm in permutations(&d.body) {
            let mut head = d.head.atom().unwrap().clone();
            head.args.reverse();
            head.pred = "renamed".into();
            let c = rename_vars(&Clause::new(Head::Atom(head), vec![], perm), &renaming);
            if &canonical_clause(&c, &is_listcount) != expected {
                return Err(format!("canonical form changed for {c}"));
            }
            n += 1;
        }
    }
    let distinct: std::collections::HashSet<&String> = canon.iter().collect();
    if distinct.len() != 4 {
        return Err("two definitions share a canonical form".into());
    }
    Ok(n)
}
