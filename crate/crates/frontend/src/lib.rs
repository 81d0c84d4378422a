//! Parsers and printers for the input problem formats and the certificate
//! text format.
//!
//! Uninterpreted predicates `P : S1 .. Sn -> Bool` are declared as functions
//! into the sort `@Pred`, and an application `(P t)` denotes the equality of
//! that function application with the constant `@true`. The bare application
//! is written `(@app P t)`.

mod cert;
mod dimacs;
mod error;
mod print;
mod problem;
pub mod sexpr;
mod smt2;

pub use cert::{
    parse_certificate, parse_lits, parse_payload, parse_rule, print_certificate, write_payload,
    write_step,
};
pub use dimacs::{parse_dimacs, parse_dimacs_raw, print_dimacs, Dimacs};
pub use error::{FrontendError, ParseError, ReferenceError, UnsupportedError};
pub use print::{clause_to_string, print_smt2, term_to_string, write_lit, write_lits, write_term};
pub use problem::{Logic, Problem, Symbol, MAX_BV_WIDTH, PRED_SORT, PRED_TRUE, RAW_APP};
pub use smt2::parse_smt2;
