use std::collections::BTreeMap;
use std::fmt::Write as _;

use certkernel_core::{Clause, TermStore};

use crate::bv::BitBlastMap;
use crate::certificate::{Certificate, ClauseId, Payload, RuleKind, Step};
use crate::{euf, lia, res, Rejection};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The empty clause was derived without any `assume` step.
    Valid,
    /// The empty clause was derived, relying on these assumed clauses.
    Trusted {
        assumptions: Vec<(ClauseId, Clause)>,
    },
    Invalid {
        reason: String,
        step: Option<ClauseId>,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Valid => "VALID",
            Verdict::Trusted { .. } => "TRUSTED",
            Verdict::Invalid { .. } => "INVALID",
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    /// Valid or Trusted.
    pub fn derived_empty(&self) -> bool {
        !matches!(self, Verdict::Invalid { .. })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleStats {
    /// Certificate steps per rule, rejected ones included.
    pub per_rule: BTreeMap<&'static str, usize>,
    pub inputs: usize,
    pub steps: usize,
    pub rejected: usize,
    pub clause_store: usize,
    pub max_clause_width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: Verdict,
    pub stats: RuleStats,
    /// Where the empty clause first appeared.
    pub empty_at: Option<ClauseId>,
    /// First step a small checker refused, if any.
    pub first_rejection: Option<(ClauseId, String)>,
}

impl CheckResult {
    /// Human-readable summary; `show` renders clauses.
    pub fn report_with(&self, show: impl Fn(&Clause) -> String) -> String {
        let mut out = String::new();
        match &self.verdict {
            Verdict::Valid => out.push_str("VALID\n"),
            Verdict::Trusted { assumptions } => {
                let _ = writeln!(out, "TRUSTED ({} assumption(s))", assumptions.len());
                for (id, c) in assumptions {
                    let _ = writeln!(out, "  assumed at step {id}: {}", show(c));
                }
            }
            Verdict::Invalid { reason, step } => match step {
                Some(s) => {
                    let _ = writeln!(out, "INVALID at step {s}: {reason}");
                }
                None => {
                    let _ = writeln!(out, "INVALID: {reason}");
                }
            },
        }
        let s = &self.stats;
        let _ = writeln!(
            out,
            "inputs: {}  steps: {}  rejected: {}  clause store: {}  max clause width: {}",
            s.inputs, s.steps, s.rejected, s.clause_store, s.max_clause_width
        );
        for (rule, n) in &s.per_rule {
            let _ = writeln!(out, "  {rule}: {n}");
        }
        out
    }

    pub fn report(&self) -> String {
        self.report_with(|c| c.to_string())
    }
}

/// Incremental replay: feed steps one at a time and inspect the clause
/// store in between. [`check`] is a loop over [`Checker::step`].
#[derive(Debug, Clone)]
pub struct Checker {
    clauses: Vec<Clause>,
    bits: BitBlastMap,
    stats: RuleStats,
    assumptions: Vec<(ClauseId, Clause)>,
    first_rejection: Option<(ClauseId, String)>,
    empty_at: Option<ClauseId>,
    structural: Option<(String, ClauseId)>,
}

/// What happened to one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    /// The small checker's conclusion was stored.
    Accepted,
    /// The small checker refused; `[pos true]` was stored.
    Rejected(String),
    /// The step was malformed; the run is over.
    Malformed(String),
    /// The run already ended (empty clause or malformed step); nothing stored.
    Finished,
}

impl Checker {
    pub fn new(store: &TermStore, inputs: &[Clause]) -> Checker {
        let mut c = Checker {
            clauses: Vec::with_capacity(inputs.len()),
            bits: BitBlastMap::new(),
            stats: RuleStats::default(),
            assumptions: Vec::new(),
            first_rejection: None,
            empty_at: None,
            structural: None,
        };
        for clause in inputs {
            let id = c.push(store, RuleKind::Input, clause.clone());
            if clause.is_empty() && c.empty_at.is_none() {
                c.empty_at = Some(id);
            }
        }
        c
    }

    fn push(&mut self, store: &TermStore, rule: RuleKind, clause: Clause) -> ClauseId {
        let id = ClauseId(self.clauses.len() as u32);
        if rule == RuleKind::Input {
            self.stats.inputs += 1;
        } else {
            *self.stats.per_rule.entry(rule.name()).or_default() += 1;
        }
        self.stats.max_clause_width = self.stats.max_clause_width.max(clause.len());
        self.bits.observe_clause(store, &clause);
        self.clauses.push(clause);
        id
    }

    /// Id the next step must have.
    pub fn next_id(&self) -> ClauseId {
        ClauseId(self.clauses.len() as u32)
    }

    pub fn clause(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses.get(id.index())
    }

    pub fn bits(&self) -> &BitBlastMap {
        &self.bits
    }

    pub fn is_finished(&self) -> bool {
        self.empty_at.is_some() || self.structural.is_some()
    }

    pub fn step(&mut self, store: &mut TermStore, step: &Step) -> StepOutcome {
        if self.is_finished() {
            return StepOutcome::Finished;
        }
        if let Err(reason) = validate_structure(step, self.clauses.len()) {
            self.structural = Some((reason.clone(), step.id));
            return StepOutcome::Malformed(reason);
        }
        self.stats.steps += 1;
        let (clause, outcome) = match apply(store, &mut self.bits, &self.clauses, step) {
            Ok(c) => {
                if step.rule == RuleKind::Assume {
                    self.assumptions.push((step.id, c.clone()));
                }
                (c, StepOutcome::Accepted)
            }
            Err(Rejection(reason)) => {
                self.stats.rejected += 1;
                self.first_rejection
                    .get_or_insert((step.id, reason.clone()));
                (Clause::trivially_true(), StepOutcome::Rejected(reason))
            }
        };
        let empty = clause.is_empty();
        let id = self.push(store, step.rule, clause);
        if empty {
            self.empty_at = Some(id);
        }
        outcome
    }

    pub fn finish(mut self) -> CheckResult {
        self.stats.clause_store = self.clauses.len();
        let verdict = match (self.structural, self.empty_at) {
            (Some((reason, step)), _) => Verdict::Invalid {
                reason,
                step: Some(step),
            },
            (None, Some(_)) if self.assumptions.is_empty() => Verdict::Valid,
            (None, Some(_)) => Verdict::Trusted {
                assumptions: self.assumptions,
            },
            (None, None) => match &self.first_rejection {
                Some((step, why)) => Verdict::Invalid {
                    reason: format!("empty clause not derived; step {step} rejected: {why}"),
                    step: Some(*step),
                },
                None => Verdict::Invalid {
                    reason: "empty clause not derived".into(),
                    step: None,
                },
            },
        };
        CheckResult {
            verdict,
            stats: self.stats,
            empty_at: self.empty_at,
            first_rejection: self.first_rejection,
        }
    }
}

/// Replays `cert` against `inputs`, which occupy clause ids `0..inputs.len()`.
///
/// Structural defects (out-of-sequence ids, forward premises, payloads not
/// matching their rule) stop the run. A step refused by its small checker
/// stores `[pos true]` and the run continues. Replay ends at the first empty
/// clause.
pub fn check(store: &mut TermStore, inputs: &[Clause], cert: &Certificate) -> CheckResult {
    let mut checker = Checker::new(store, inputs);
    for step in &cert.steps {
        if checker.is_finished() {
            break;
        }
        checker.step(store, step);
    }
    checker.finish()
}

fn validate_structure(step: &Step, next: usize) -> Result<(), String> {
    if step.id.index() != next {
        return Err(format!(
            "step id {} out of sequence, expected {next}",
            step.id
        ));
    }
    if let Some(p) = step.premises.iter().find(|p| p.index() >= next) {
        return Err(format!("premise {p} is not an earlier clause"));
    }
    if !step.payload.matches(step.rule) {
        return Err(format!("payload does not match rule {}", step.rule));
    }
    if step.rule == RuleKind::Input {
        return Err("input clauses cannot appear as certificate steps".into());
    }
    Ok(())
}

fn no_premises(step: &Step) -> Result<(), Rejection> {
    if step.premises.is_empty() {
        Ok(())
    } else {
        Err(Rejection::new(format!("{} takes no premises", step.rule)))
    }
}

fn apply(
    store: &mut TermStore,
    bits: &mut BitBlastMap,
    clauses: &[Clause],
    step: &Step,
) -> Result<Clause, Rejection> {
    match (&step.payload, step.rule) {
        (Payload::None, RuleKind::Res) => {
            let premises: Vec<&Clause> =
                step.premises.iter().map(|p| &clauses[p.index()]).collect();
            res::try_resolve_chain(&premises)
        }
        (Payload::Cnf(p), RuleKind::Cnf(kind)) => {
            no_premises(step)?;
            res::try_cnf_lemma(store, kind, p)
        }
        (Payload::Euf(p), RuleKind::Euf) => {
            no_premises(step)?;
            euf::try_check_euf(store, p)
        }
        (Payload::Lia(p), RuleKind::Lia) => {
            no_premises(step)?;
            lia::try_check_lia(store, p)
        }
        (Payload::Clause(lits), RuleKind::Assume) => {
            no_premises(step)?;
            store
                .mk_clause(lits.iter().copied())
                .map_err(|e| Rejection::new(e.to_string()))
        }
        (Payload::Bv(p), rule) => {
            let (id, prem) = (step.id, step.premises.as_slice());
            match rule {
                RuleKind::BbVar => bits.bb_var(store, id, prem, p),
                RuleKind::BbConst => bits.bb_const(store, id, prem, p),
                RuleKind::BbNot => bits.bb_not(store, id, prem, p),
                RuleKind::BbBitwise(op) => bits.bb_bitwise(store, op, id, prem, p),
                RuleKind::BbAdd => bits.bb_add(store, id, prem, p),
                RuleKind::BbEq => bits.bb_eq(store, prem, p),
                RuleKind::BbUlt => bits.bb_ult(store, prem, p),
                _ => unreachable!("payload agreement checked"),
            }
        }
        _ => unreachable!("payload agreement checked"),
    }
}

/// Runs the small checker for `rule` on a single step, outside of a
/// certificate. `premises` pairs each premise clause with its id; bit-blasting
/// rules use `bits` for operand lookup. Returns `[pos true]` on rejection.
pub fn dispatch(
    store: &mut TermStore,
    bits: &mut BitBlastMap,
    rule: RuleKind,
    step_id: ClauseId,
    premises: &[(ClauseId, &Clause)],
    payload: &Payload,
) -> Clause {
    if !payload.matches(rule) || rule == RuleKind::Input {
        return Clause::trivially_true();
    }
    let step = Step {
        id: step_id,
        rule,
        premises: premises.iter().map(|(id, _)| *id).collect(),
        payload: payload.clone(),
    };
    // Premises are placed at their ids in a scratch store.
    let mut clauses = Vec::new();
    for (id, c) in premises {
        if id.index() >= step_id.index() {
            return Clause::trivially_true();
        }
        if clauses.len() <= id.index() {
            clauses.resize(id.index() + 1, Clause::trivially_true());
        }
        clauses[id.index()] = (*c).clone();
    }
    apply(store, bits, &clauses, &step).unwrap_or_else(|_| Clause::trivially_true())
}
