//! Test support: a proof builder that replays as it goes, a refutation
//! producer, problem generators per theory, and certificate mutators.

mod builder;
mod chain;
mod complete;
mod dpll;
pub mod gen;
pub mod mutate;
pub mod nested;
mod tseitin;

pub use builder::ProofBuilder;
pub use chain::{resolution_chain, ChainProblem};
pub use complete::complete;
pub use dpll::{refute, Assignment};
pub use tseitin::{clausify, lemmas_for};
