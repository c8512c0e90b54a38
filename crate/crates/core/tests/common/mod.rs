//! Expected clause sets for the `double` program and helpers to compare them.
#![allow(dead_code)]

use std::collections::BTreeMap;

use catachc::frontend::load_clauses;
use catachc::ir::{canonical_clause, Atom, Clause, Head, Program};
use catachc::transform::{DefSet, Definition};

pub mod fuzzgen;
pub mod lattice;

pub const DOUBLE: &str = include_str!("../../../../benchmarks/double.chc");

const DECL: &str = ":- cata listcount(in:int, adt:list(int), out:int).
:- pred double(list(int), list(int)).
:- pred eq(list(int), list(int)).
:- pred append(list(int), list(int), list(int)).
:- pred true_list_int(list(int)).
:- pred new1(int, list(int), int, list(int), int).
:- pred new2(int, list(int), int, list(int), int, list(int), int).
:- pred new3(int, list(int), int, list(int), int).
:- pred new4(int, list(int), int).
:- pred new1_woADTs(int, int, int).
:- pred new2_woADTs(int, int, int, int).
:- pred new3_woADTs(int, int, int).
:- pred new4_woADTs(int, int).
";

pub const DEFS: &str = "
new1(A,B,C,E,F) :- listcount(A,B,C), listcount(A,E,F), double(B,E).
new2(A,B,C,E,F,H,I) :- listcount(A,B,C), listcount(A,E,F), listcount(A,H,I), append(H,B,E).
new3(A,B,C,E,F) :- listcount(A,B,C), listcount(A,E,F), eq(E,B).
new4(A,B,C) :- listcount(A,B,C), true_list_int(B).
";

pub const UNFOLDED: &str = "new1(A,B,C,E,F) :- listcount(A,B,C), listcount(A,E,F), eq(B,G), append(B,G,E).";
pub const WITH_CATAS: &str = "new1(A,B,C,E,F) :- listcount(A,B,C), listcount(A,E,F), listcount(A,H,I), eq(B,H), append(B,H,E).";
pub const FOLDED: &str = "new1(A,B,C,E,F) :- new2(A,M,K,E,F,B,C), new3(A,M,K,B,C).";
pub const QUERY_FOLDED: &str = "false :- C=2*D+1, new1(A,E,F,G,C).";

pub const T_W: &str = "
false :- C=2*D+1, new1(A,E,F,G,C).
new1(A,B,C,E,F) :- new2(A,M,K,E,F,B,C), new3(A,M,K,B,C).
new2(A,B,C,B,C,[],G) :- G=0, new4(A,B,C).
new2(A,B,C,[E|F],G,[E|J],K) :- G=ite(A=E,N+1,N), K=ite(A=E,P+1,P), new2(A,B,C,F,N,J,P).
new3(A,B,C,B,C) :- new4(A,B,C).
new4(A,[],B) :- B=0.
new4(A,[B|C],D) :- D=ite(A=B,F+1,F), new4(A,C,F).
";

pub const T_WWO: &str = "
false :- C=2*D+1, new1(A,E,F,G,C), new1_woADTs(A,F,C).
new1(A,B,C,E,F) :- new2(A,M,K,E,F,B,C), new2_woADTs(A,K,F,C), new3(A,M,K,B,C), new3_woADTs(A,K,C).
new2(A,B,C,B,C,[],G) :- G=0, new4(A,B,C), new4_woADTs(A,C).
new2(A,B,C,[E|F],G,[E|J],K) :- G=ite(A=E,N+1,N), K=ite(A=E,P+1,P), new2(A,B,C,F,N,J,P), new2_woADTs(A,C,N,P).
new3(A,B,C,B,C) :- new4(A,B,C), new4_woADTs(A,C).
new4(A,[],B) :- B=0.
new4(A,[B|C],D) :- D=ite(A=B,F+1,F), new4(A,C,F), new4_woADTs(A,F).
new1_woADTs(A,B,D) :- new2_woADTs(A,I,D,B), new3_woADTs(A,I,B).
new2_woADTs(A,B,B,F) :- F=0, new4_woADTs(A,B).
new2_woADTs(A,B,D,F) :- D=ite(A=I,K+1,K), F=ite(A=I,L+1,L), new2_woADTs(A,B,K,L).
new3_woADTs(A,B,B) :- new4_woADTs(A,B).
new4_woADTs(A,B) :- B=0.
new4_woADTs(A,B) :- B=ite(A=C,D+1,D), new4_woADTs(A,D).
";

/// Reads clauses written with the `listcount` declaration in scope.
pub fn clauses(text: &str) -> Program {
    load_clauses(&format!("{DECL}{text}")).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

pub fn all_clauses(p: &Program) -> Vec<Clause> {
    let mut v = p.queries.clone();
    v.extend(p.clauses.iter().cloned());
    v
}

pub fn clause(text: &str) -> Clause {
    all_clauses(&clauses(text)).remove(0)
}

pub fn golden_defs() -> DefSet {
    let p = clauses(DEFS);
    DefSet::from_defs(
        p.clauses
            .iter()
            .map(|c| {
                let (catas, prog): (Vec<Atom>, Vec<Atom>) = c.body.iter().cloned().partition(|a| a.pred == "listcount");
                Definition { id: c.id, head: c.head.atom().unwrap().clone(), catas, prog: prog[0].clone() }
            })
            .collect(),
    )
}

fn is_cata(p: &str) -> bool {
    p == "listcount"
}

pub fn canon(c: &Clause) -> String {
    canonical_clause(c, &is_cata)
}

/// Renames predicates of `c`, including their `_woADTs` forms.
pub fn rename_preds(c: &Clause, map: &BTreeMap<String, String>) -> Clause {
    let ren = |a: &Atom| {
        let mut a = a.clone();
        if let Some(base) = a.pred.strip_suffix("_woADTs") {
            if let Some(n) = map.get(base) {
                a.pred = format!("{n}_woADTs");
            }
        } else if let Some(n) = map.get(&a.pred) {
            a.pred = n.clone();
        }
        a
    };
    Clause {
        id: c.id,
        head: match &c.head {
            Head::False => Head::False,
            Head::Atom(h) => Head::Atom(ren(h)),
        },
        constraints: c.constraints.clone(),
        body: c.body.iter().map(ren).collect(),
    }
}

/// Expected new-predicate name to computed name, matched through program atoms.
pub fn pred_map(expected: &DefSet, got: &DefSet) -> BTreeMap<String, String> {
    expected.iter().filter_map(|d| got.get(d.program_pred()).map(|g| (d.pred().to_string(), g.pred().to_string()))).collect()
}

/// Sorted canonical strings of `got` and of `expected` after predicate renaming.
pub fn canon_sets(got: &[Clause], expected: &[Clause], map: &BTreeMap<String, String>) -> (Vec<String>, Vec<String>) {
    let mut g: Vec<String> = got.iter().map(canon).collect();
    let mut e: Vec<String> = expected.iter().map(|c| canon(&rename_preds(c, map))).collect();
    g.sort();
    e.sort();
    (g, e)
}
