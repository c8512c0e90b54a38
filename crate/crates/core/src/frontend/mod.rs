//! Surface language: lexing, parsing, sort checking, query validation, and
//! catamorphism coverage.

pub mod ast;
mod coverage;
mod helpers;
mod infer;
pub mod lexer;
mod parser;
mod print;
mod query;
mod sortcheck;

pub use coverage::{cover_clause, ensure_cata_coverage, ensure_true_pred, is_true_pred, true_pred_name};
pub use helpers::sort_tag;
pub use parser::{parse_expr, parse_program};
pub use print::{print_clauses, print_program};
pub use query::{validate_query, QueryShape};
pub use sortcheck::{sort_check, sort_check_raw};

use crate::error::Result;
use crate::ir::Program;

/// Parses and sort-checks clauses that need not satisfy the program shape
/// conditions, keeping them as written.
pub fn load_clauses(text: &str) -> Result<Program> {
    sort_check_raw(&parse_program(text)?)
}

/// Parses and sort-checks source text.
pub fn load_program(text: &str) -> Result<Program> {
    sort_check(&parse_program(text)?)
}
