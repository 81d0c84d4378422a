//! The main checker and its small checkers.
//!
//! A [`Certificate`] is a linear list of [`Step`]s. [`check`] replays it
//! against the input clauses, handing each step to the small checker for its
//! rule. Small checkers are total: when they cannot validate a step they
//! produce the trivially true clause `[pos true]`, which can never help
//! derive the empty clause.

pub mod batch;
pub mod bv;
mod certificate;
mod check;
pub mod euf;
pub mod lia;
pub mod res;

pub use bv::{BitBlastMap, BvPayload};
pub use certificate::{BitOp, Certificate, ClauseId, CnfKind, Payload, RuleKind, Step};
pub use check::{check, dispatch, CheckResult, Checker, RuleStats, StepOutcome, Verdict};
pub use euf::{EqRule, EqStep, EufPayload};
pub use lia::{LiaPayload, RowRef};
pub use res::CnfPayload;

use thiserror::Error;

/// Why a small checker refused a step.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct Rejection(pub String);

impl Rejection {
    pub(crate) fn new(msg: impl Into<String>) -> Rejection {
        Rejection(msg.into())
    }
}

pub(crate) fn reject<T>(msg: impl Into<String>) -> Result<T, Rejection> {
    Err(Rejection::new(msg))
}
