//! Random small programs over lists and trees: the transformation succeeds, its
//! outputs mention no catamorphism, the definitions are monovariant and well
//! shaped, and a bounded model comparison agrees.

mod common;

use catachc::oracle::{compare_transformation, Limits, Universe};
use catachc::Error;
use common::fuzzgen::{program, transform_checked};

#[test]
fn random_programs_transform_cleanly() {
    let mut compared = 0;
    let mut with_defs = 0;
    let mut over_budget = 0;
    for seed in 0..200u64 {
        let r = transform_checked(seed).unwrap_or_else(|e| panic!("{e}"));
        let out = &r.output;
        if !out.defs.is_empty() {
            with_defs += 1;
        }
        // A reduced instantiation budget keeps the run short; programs that exceed
        // it are counted and must stay rare.
        if seed % 4 == 0 {
            let u = Universe::new(&out.program.datatypes, &[0, 1], 2);
            let limits = Limits { max_instantiations: 500_000, ..Limits::default() };
            match compare_transformation(out, &u, limits) {
                Ok(cmp) => {
                    assert!(cmp.is_ok(), "seed {seed}:\n{cmp}\n{}", program(seed));
                    compared += 1;
                }
                Err(Error::Budget(_)) => over_budget += 1,
                Err(e) => panic!("seed {seed}: {e}\n{}", program(seed)),
            }
        }
    }
    assert!(with_defs >= 150, "only {with_defs} programs produced definitions");
    assert_eq!(compared + over_budget, 50);
    assert!(over_budget <= 8, "{over_budget} comparisons over budget");
}
