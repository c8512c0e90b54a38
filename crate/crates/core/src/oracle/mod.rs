//! Bounded ground semantics of clause sets over a finite universe, used as an
//! independent check of the transformation.

mod compare;
mod eval;
mod value;

pub use compare::{compare_transformation, Comparison};
pub use eval::{bounded_least_model, check_query_bounded, consequences, GroundModel, Limits, QueryVerdict};
pub use value::{Universe, Value};

#[cfg(test)]
mod tests;
