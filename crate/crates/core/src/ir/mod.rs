//! Many-sorted CHC representation shared by every stage of the pipeline.

pub mod canon;
pub mod names;
pub mod normalize;
pub mod print;
pub mod program;
pub mod subst;
pub mod term;

pub use canon::canonical_clause;
pub use names::NameSupply;
pub use normalize::{flatten_head, normalize_clause, rename_all, rename_apart};
pub use program::{CataSig, CtorDecl, DataDecl, Program, SortPat};
pub use subst::{unify, unify_atoms, Substitution, UnifyError};
pub use term::{adt_vars_of, Atom, Clause, Constraint, Head, LinExpr, RelOp, Sort, Term, Var};
