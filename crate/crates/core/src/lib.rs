//! Shared vocabulary of the certificate checkers: sorts, hash-consed terms
//! and canonical clauses.
//!
//! Nothing in this crate evaluates semantics. It only builds and inspects
//! well-sorted syntax.

mod clause;
mod term;

pub use clause::{Clause, Lit};
pub use term::{BvValue, FunId, FunSym, Node, Sort, SortError, TermId, TermStore};
