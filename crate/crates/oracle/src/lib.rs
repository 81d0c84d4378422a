//! Finite-model semantics for terms and clauses, by exhaustive enumeration.
//!
//! This crate only reads the term store; it shares no code with the
//! checkers it is used to test. Uninterpreted sorts are given a domain of
//! `max_domain` elements and integers range over `[-int_box, int_box]`, so an
//! `Unsat` answer means "no model within these bounds". That is exact for
//! pure Boolean and bit-vector problems and a bounded check otherwise.
//!
//! Function symbols are handled by assigning a value to every application
//! term and keeping only assignments where equal arguments give equal
//! results.

mod enumerate;
mod eval;

pub use enumerate::{
    brute_unsat, brute_unsat_sequential, clause_valid, euf_lemma_valid_oracle, implied, Budget,
    Outcome, ResourceError,
};
pub use eval::{eval, eval_clause, EvalError, FunTable, Model, Value};
