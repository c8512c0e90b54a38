//! Order, join, and meet laws on generated definitions, and monotonicity of one
//! application of the definition operator.

mod common;

use catachc::transform::TransformOptions;
use common::lattice::{bench, bound_laws, def_strategy, join_laws, monotone_pairs, order_laws};
use proptest::prelude::*;

proptest! {
    #[test]
    fn join_is_commutative_associative_and_idempotent(
        a in def_strategy("a", 1), b in def_strategy("b", 2), c in def_strategy("c", 3)
    ) {
        let r = join_laws(&a, &b, &c);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn join_is_an_upper_bound_and_meet_a_lower_bound(a in def_strategy("a", 1), b in def_strategy("b", 2)) {
        let r = bound_laws(&a, &b);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn order_agrees_with_join_and_is_antisymmetric(a in def_strategy("a", 1), b in def_strategy("b", 2)) {
        let r = order_laws(&a, &b);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }
}

#[test]
fn definition_operator_is_monotone_on_100_comparable_pairs() {
    assert_eq!(monotone_pairs(100, 7), Ok(100));
}

#[test]
fn quicksort_fixpoint_has_one_definition_per_predicate_with_every_atom() {
    // The abstraction names listmin, listmax, and is_asorted. Unfolding is_asorted
    // also leaves hd atoms, which join a definition when they are over its arguments.
    let prep = bench("quicksortc");
    let out = catachc::transform::cata_abs(&prep.program, &prep.specs, TransformOptions::default()).unwrap();
    let cs = &out.program.catas;
    out.defs.check_invariants(cs).unwrap();
    for d in out.defs.iter() {
        let lists = d.prog.args.iter().filter(|t| t.sort().is_adt()).count();
        for c in ["listmin", "listmax", "is_asorted"] {
            assert_eq!(d.catas.iter().filter(|a| a.pred == c).count(), lists, "{c} in {}", d.clause());
        }
        assert!(d.catas.iter().filter(|a| a.pred == "hd").count() <= lists, "{}", d.clause());
    }
    let preds: Vec<&str> = out.defs.iter().map(|d| d.program_pred()).collect();
    for p in ["qs", "partition", "append"] {
        assert!(preds.contains(&p), "no definition for {p}: {preds:?}");
    }
}
