//! Property tests for unification, substitution, and clause canonicalization.

mod common;

use catachc::ir::subst::unify_lists;
use catachc::ir::{canonical_clause, unify, Atom, Sort, Substitution, Term};
use common::lattice::{canonical_permutation_check, definition_clause, is_listcount, lc, lv};
use proptest::prelude::*;

fn list_var(prefix: &'static str) -> impl Strategy<Value = Term> {
    (0..4u8).prop_map(move |k| Term::var(format!("{prefix}{k}"), Sort::list_int()))
}

fn elem(prefix: &'static str) -> impl Strategy<Value = Term> {
    prop_oneof![(0..3i64).prop_map(Term::Int), (0..3u8).prop_map(move |k| Term::int_var(format!("{prefix}H{k}")))]
}

fn list_term(prefix: &'static str) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![list_var(prefix), Just(Term::nil_int())];
    leaf.prop_recursive(3, 8, 2, move |inner| (elem(prefix), inner).prop_map(|(h, t)| Term::cons_int(h, t)))
}

fn vars_of(t: &Term) -> Vec<String> {
    let mut vs = Vec::new();
    t.collect_vars(&mut vs);
    vs.into_iter().map(|v| v.name).collect()
}

proptest! {
    #[test]
    fn unifiers_equate_both_sides(a in list_term("L"), b in list_term("L")) {
        if let Some(s) = unify(&a, &b).unwrap() {
            prop_assert_eq!(s.apply_term(&a), s.apply_term(&b));
        }
    }

    #[test]
    fn unifiers_are_idempotent(a in list_term("L"), b in list_term("L")) {
        if let Some(s) = unify(&a, &b).unwrap() {
            for t in [&a, &b] {
                let once = s.apply_term(t);
                prop_assert_eq!(s.apply_term(&once), once);
            }
            for img in s.map.values() {
                prop_assert!(vars_of(img).iter().all(|v| s.get(v).is_none()));
            }
        }
    }

    #[test]
    fn a_term_unifies_with_any_instance_renamed_apart(
        a in list_term("L"),
        images in proptest::collection::vec(list_term("M"), 4),
        elems in proptest::collection::vec(elem("M"), 3),
    ) {
        let mut rho = Substitution::new();
        for (k, t) in images.into_iter().enumerate() {
            rho.insert(&format!("L{k}"), t);
        }
        for (k, t) in elems.into_iter().enumerate() {
            rho.insert(&format!("LH{k}"), t);
        }
        let b = rho.apply_term(&a);
        let s = unify(&a, &b).unwrap();
        prop_assert!(s.is_some(), "{} and {} should unify", a, b);
        let s = s.unwrap();
        prop_assert_eq!(s.apply_term(&a), s.apply_term(&b));
        // rho is itself a unifier, so it factors through the most general one.
        let mut vs = Vec::new();
        a.collect_vars(&mut vs);
        b.collect_vars(&mut vs);
        for v in vs {
            let x = Term::Var(v);
            prop_assert_eq!(rho.apply_term(&s.apply_term(&x)), rho.apply_term(&x));
        }
    }

    #[test]
    fn list_unification_agrees_with_pairwise(a in list_term("L"), b in list_term("L"), c in list_term("L"), d in list_term("L")) {
        if let Some(s) = unify_lists(&[a.clone(), c.clone()], &[b.clone(), d.clone()]).unwrap() {
            prop_assert_eq!(s.apply_term(&a), s.apply_term(&b));
            prop_assert_eq!(s.apply_term(&c), s.apply_term(&d));
        }
    }
}

#[test]
fn occurs_check_rejects_cyclic_bindings() {
    let l = Term::var("L", Sort::list_int());
    let cyc = Term::cons_int(Term::int_var("H"), l.clone());
    assert_eq!(unify(&l, &cyc).unwrap(), None);
    assert_eq!(unify(&cyc, &l).unwrap(), None);
}

#[test]
fn sort_mismatch_is_an_error() {
    assert!(unify(&Term::int_var("X"), &Term::var("L", Sort::list_int())).is_err());
}

#[test]
fn canonical_forms_ignore_atom_order_variable_names_and_head_order() {
    assert_eq!(canonical_permutation_check(), Ok(6 + 24 + 6 + 2));
}

#[test]
fn canonical_forms_separate_swapped_program_arguments() {
    let a = definition_clause("n", vec![lc("A", "B", "C"), Atom::new("eq", vec![lv("B"), lv("E")])]);
    let b = definition_clause("n", vec![lc("A", "E", "C"), Atom::new("eq", vec![lv("B"), lv("E")])]);
    assert_ne!(canonical_clause(&a, &is_listcount), canonical_clause(&b, &is_listcount));
}
