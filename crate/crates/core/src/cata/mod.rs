//! Catamorphism definitions: schema validation, bounded functionality checks, and
//! generation of per-predicate abstraction specifications.

mod bounded;
mod schema;
mod specs;

pub use bounded::{check_functionality_bounded, FunctionalityReport};
pub use schema::{validate_all, validate_catamorphism, CataDef};
pub(crate) use specs::generate_spec;
pub use specs::{build_abstraction_specs, print_spec, split_cata_atom, AbstractionSpec, CataAbstraction, SpecMap};
