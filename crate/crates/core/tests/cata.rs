use catachc::cata::{check_functionality_bounded, validate_all, validate_catamorphism, CataDef, FunctionalityReport};
use catachc::frontend::load_program;
use catachc::Error;

const CATALIB: &str = include_str!("../../../benchmarks/catalib.chc");

const NAMES: [&str; 10] = ["listcount", "size", "sum", "listmin", "listmax", "hd", "is_asorted", "allpos", "member", "treecount"];

#[test]
fn library_catamorphisms_validate() {
    let p = load_program(CATALIB).unwrap();
    for n in NAMES {
        validate_catamorphism(&p, n).unwrap_or_else(|e| panic!("{n}: {e}"));
    }
    let order: Vec<String> = validate_all(&p).unwrap().into_iter().map(|d| d.name).collect();
    let pos = |n: &str| order.iter().position(|m| m == n).unwrap();
    assert!(pos("hd") < pos("is_asorted"));
}

#[test]
fn library_catamorphisms_are_functional_and_total() {
    let p = load_program(CATALIB).unwrap();
    for n in NAMES {
        let d = validate_catamorphism(&p, n).unwrap();
        let r = check_functionality_bounded(&p, &d, 3, &[0, 1]);
        assert!(r.is_ok(), "{n}: {r:?}");
    }
}

#[test]
fn listcount_checks_every_input_pair() {
    let p = load_program(CATALIB).unwrap();
    let d = validate_catamorphism(&p, "listcount").unwrap();
    assert_eq!(check_functionality_bounded(&p, &d, 3, &[0, 1]), FunctionalityReport::Ok { checked: 30 });
}

fn without_nil_case(src: &str) -> String {
    src.replace("hd([],B,V) :- B=false, V=0.\n", "")
}

#[test]
fn hd_without_nil_case_is_not_total() {
    let p = load_program(&without_nil_case(CATALIB)).unwrap();
    let err = validate_catamorphism(&p, "hd").unwrap_err();
    assert!(matches!(err, Error::Schema { .. }) && err.to_string().contains("nil"), "{err}");
    let d = CataDef::collect(&p, "hd").unwrap();
    assert_eq!(check_functionality_bounded(&p, &d, 3, &[0, 1]), FunctionalityReport::NotTotal { input: "hd([])".into() });
}

#[test]
fn overlapping_cases_are_not_functional() {
    let src = CATALIB.replace("size([],N) :- N=0.", "size([],N) :- N>=0, N=<1.");
    let p = load_program(&src).unwrap();
    let d = CataDef::collect(&p, "size").unwrap();
    assert!(matches!(check_functionality_bounded(&p, &d, 2, &[0, 1]), FunctionalityReport::NotFunctional { .. }));
}

fn schema_error(src: &str, name: &str) -> String {
    let p = load_program(src).unwrap();
    match validate_catamorphism(&p, name) {
        Err(e @ Error::Schema { .. }) => e.to_string(),
        other => panic!("expected a schema violation, got {other:?}"),
    }
}

#[test]
fn schema_violations() {
    let decl = ":- cata size(adt:list(int), out:int).\nsize([],N) :- N=0.\n";
    let msg = schema_error(&format!("{decl}size([H|T],N) :- N=S+1, size(L,S)."), "size");
    assert!(msg.contains("immediate subterm"), "{msg}");
    let lc = ":- cata lc(in:int, adt:list(int), out:int).\nlc(X,[],N) :- N=0.\n";
    let msg = schema_error(&format!("{lc}lc(X,[H|T],N) :- N=M, lc(H,T,M)."), "lc");
    assert!(msg.contains("inputs unchanged"), "{msg}");
    let msg = schema_error(&format!("{decl}size([H|T],N) :- N=S+1, size(T,S).\nsize([H|T],N) :- N=0."), "size");
    assert!(msg.contains("both handle"), "{msg}");
    let err = load_program(":- cata f(adt:list(int), out:list(int)).\nf([],L).\nf([H|T],L).").unwrap_err();
    assert!(matches!(err, Error::Schema { .. }) && err.to_string().contains("ADT output"), "{err}");
}

#[test]
fn program_atom_in_catamorphism_body_is_rejected() {
    let src = ":- cata size(adt:list(int), out:int).\nsize([],N) :- N=0.\nsize([H|T],N) :- N=S+1, p(S), size(T,S).\np(X).";
    assert!(load_program(src).is_err());
}

#[test]
fn cyclic_catamorphisms_are_rejected() {
    let src = ":- cata f(adt:list(int), out:int).\n:- cata g(adt:list(int), out:int).\n\
        f([],N) :- N=0.\nf([H|T],N) :- N=M, g(T,M).\ng([],N) :- N=0.\ng([H|T],N) :- N=M, f(T,M).";
    let p = load_program(src).unwrap();
    assert!(validate_all(&p).unwrap_err().to_string().contains("cyclic"));
}
