//! Compiles catamorphisms out of constrained Horn clauses over algebraic data types.
//!
//! The pipeline is `frontend` (parse, sort-check, validate queries), `cata`
//! (schema validation and abstraction specifications), `transform` (the
//! definition fixpoint, folding, and erasure), and `backend` (SMT-LIB emission and
//! solver driving). `oracle` is a bounded least-model evaluator used by tests and
//! by the bounded functionality checks.

pub mod backend;
pub mod bench;
pub mod cata;
pub mod error;
pub mod frontend;
pub mod ir;
pub mod oracle;
pub mod pipeline;
pub mod transform;

pub use error::{Error, Result};
