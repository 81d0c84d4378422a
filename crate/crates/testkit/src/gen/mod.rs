//! Random problems with certificates. Every generator retries until its
//! problem is refuted, so the returned certificate checks Valid.

mod bv;
mod euf;
mod lia;
mod prop;
mod sat;

use certkernel_core::{Clause, Lit, Sort, TermId};
use certkernel_frontend::sexpr::Pos;
use certkernel_frontend::{Logic, Problem, Symbol};
use certkernel_kernel::{Certificate, ClauseId};
use rand::Rng;

use crate::builder::ProofBuilder;
use crate::dpll::refute;
use crate::tseitin::clausify;

pub use bv::{bitblast, bv_instance};
pub use euf::euf_instance;
pub use lia::{lia_instance, lia_lemma, LiaLemma};
pub use prop::{prop_instance, random_formula};
pub use sat::{random_cnf, sat_instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theory {
    Sat,
    Prop,
    Euf,
    Lia,
    Bv,
}

impl Theory {
    pub const ALL: [Theory; 5] = [
        Theory::Sat,
        Theory::Prop,
        Theory::Euf,
        Theory::Lia,
        Theory::Bv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theory::Sat => "sat",
            Theory::Prop => "prop",
            Theory::Euf => "euf",
            Theory::Lia => "lia",
            Theory::Bv => "bv",
        }
    }
}

/// An unsatisfiable problem and a certificate refuting it.
#[derive(Debug, Clone)]
pub struct Instance {
    pub problem: Problem,
    pub cert: Certificate,
}

pub fn generate<R: Rng>(theory: Theory, rng: &mut R) -> Instance {
    match theory {
        Theory::Sat => sat_instance(rng),
        Theory::Prop => prop_instance(rng),
        Theory::Euf => euf_instance(rng),
        Theory::Lia => lia_instance(rng),
        Theory::Bv => bv_instance(rng),
    }
}

pub(crate) fn declare(p: &mut Problem, name: &str, sort: Sort) -> TermId {
    match p.declare(name, vec![], sort, Pos::default()) {
        Ok(Symbol::Const(t)) => t,
        other => panic!("declaring {name}: {other:?}"),
    }
}

pub(crate) fn assert(p: &mut Problem, t: TermId) {
    p.assertions.push(t);
    p.inputs.push(Clause::from_lits([Lit::pos(t)]));
}

pub(crate) fn new_problem(logic: Logic) -> Problem {
    Problem::new(logic)
}

/// Runs `lemmas` (which returns atoms to decide first), clausifies and
/// searches; `None` when the problem is
/// satisfiable.
pub(crate) fn certify(
    mut problem: Problem,
    lemmas: impl FnOnce(&mut Problem, &mut ProofBuilder) -> Vec<TermId>,
) -> Option<Instance> {
    let mut b = ProofBuilder::new(&problem.store, &problem.inputs);
    let priority = lemmas(&mut problem, &mut b);
    clausify(&mut problem.store, &mut b);
    let empty: ClauseId = refute(&mut problem.store, &mut b, &priority).ok()?;
    debug_assert!(b.clause(empty).is_empty());
    Some(Instance {
        problem,
        cert: b.finish(),
    })
}
