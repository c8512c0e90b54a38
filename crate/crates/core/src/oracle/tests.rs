use super::*;
use crate::frontend::load_program;
use crate::ir::Clause;

const DOUBLE: &str = include_str!("../../../../benchmarks/double.chc");

fn definite(p: &crate::ir::Program) -> Vec<Clause> {
    p.clauses.clone()
}

#[test]
fn listcount_and_append_facts() {
    let p = load_program(DOUBLE).unwrap();
    let u = Universe::new(&p.datatypes, &[0, 1], 3);
    let m = bounded_least_model(&definite(&p), &u, Limits::default()).unwrap();
    let l = Value::int_list;
    assert!(m.contains("listcount", &[Value::int(0), l(&[0, 1, 0]), Value::int(2)]));
    assert!(!m.contains("listcount", &[Value::int(0), l(&[0, 1, 0]), Value::int(1)]));
    assert!(m.contains("append", &[l(&[0]), l(&[0]), l(&[0, 0])]));
    assert!(m.contains("double", &[l(&[1]), l(&[1, 1])]));
    // Doubling a size-2 list leaves the bound.
    assert!(!m.pred_names().any(|p| p == "double") || m.facts("double").iter().all(|t| t[0].size() <= 1));
    // listcount is total: one fact per (input, list) pair.
    assert_eq!(m.facts("listcount").len(), 2 * 15);
}

#[test]
fn empty_clause_set_has_empty_model() {
    let u = Universe::new(&Default::default(), &[0], 2);
    assert!(bounded_least_model(&[], &u, Limits::default()).unwrap().is_empty());
}

#[test]
fn odd_count_query_has_no_witness() {
    let p = load_program(DOUBLE).unwrap();
    let u = Universe::new(&p.datatypes, &[0, 1], 4);
    let m = bounded_least_model(&definite(&p), &u, Limits::default()).unwrap();
    let v = check_query_bounded(&p.queries[0], &m, &u, Limits::default()).unwrap();
    assert_eq!(v, QueryVerdict::NoWitnessAtBound);
}

#[test]
fn even_count_query_is_violated() {
    let src = DOUBLE.replace("M=2*N+1", "M=2*N");
    let p = load_program(&src).unwrap();
    let u = Universe::new(&p.datatypes, &[0, 1], 2);
    let m = bounded_least_model(&definite(&p), &u, Limits::default()).unwrap();
    let QueryVerdict::Violated(w) = check_query_bounded(&p.queries[0], &m, &u, Limits::default()).unwrap() else { panic!() };
    assert!(w.contains("M=0"), "{w}");
}

#[test]
fn budget_is_reported() {
    let p = load_program(DOUBLE).unwrap();
    let u = Universe::new(&p.datatypes, &[0, 1], 3);
    let tight = Limits { max_facts: 5, max_instantiations: 1_000_000 };
    assert!(matches!(bounded_least_model(&definite(&p), &u, tight), Err(crate::Error::Budget(_))));
}
