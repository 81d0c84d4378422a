use certkernel_core::{Clause, TermStore};
use certkernel_kernel::{Certificate, Checker, ClauseId, Payload, RuleKind, Step, StepOutcome};

/// Appends steps to a certificate while replaying them, so every step's
/// conclusion is known as soon as it is added.
#[derive(Debug, Clone)]
pub struct ProofBuilder {
    checker: Checker,
    cert: Certificate,
    num_inputs: usize,
}

impl ProofBuilder {
    pub fn new(store: &TermStore, inputs: &[Clause]) -> ProofBuilder {
        ProofBuilder {
            checker: Checker::new(store, inputs),
            cert: Certificate::default(),
            num_inputs: inputs.len(),
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    /// Id the next step will get.
    pub fn next_id(&self) -> ClauseId {
        self.checker.next_id()
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        self.checker.clause(id).expect("clause id in range")
    }

    pub fn is_finished(&self) -> bool {
        self.checker.is_finished()
    }

    /// Adds a step; a refused step is still recorded and its reason returned.
    pub fn step(
        &mut self,
        store: &mut TermStore,
        rule: RuleKind,
        premises: Vec<ClauseId>,
        payload: Payload,
    ) -> Result<ClauseId, String> {
        let step = Step {
            id: self.next_id(),
            rule,
            premises,
            payload,
        };
        let outcome = self.checker.step(store, &step);
        let id = step.id;
        match outcome {
            StepOutcome::Accepted => {
                if self.clause(id).is_empty() {
                    self.cert.qed = Some(id);
                }
                self.cert.steps.push(step);
                Ok(id)
            }
            StepOutcome::Rejected(why) => {
                self.cert.steps.push(step);
                Err(why)
            }
            StepOutcome::Malformed(why) => Err(why),
            StepOutcome::Finished => Err("the run already derived the empty clause".into()),
        }
    }

    /// Like [`ProofBuilder::step`] but panics on refusal; for generators whose
    /// steps are correct by construction.
    pub fn must(
        &mut self,
        store: &mut TermStore,
        rule: RuleKind,
        premises: Vec<ClauseId>,
        payload: Payload,
    ) -> ClauseId {
        match self.step(store, rule, premises, payload) {
            Ok(id) => id,
            Err(why) => panic!("generated {} step refused: {why}", rule.name()),
        }
    }

    /// All stored clauses with their ids, inputs first.
    pub fn clauses(&self) -> impl Iterator<Item = (ClauseId, &Clause)> {
        (0..self.next_id().0).map(|i| (ClauseId(i), self.clause(ClauseId(i))))
    }

    pub fn finish(self) -> Certificate {
        self.cert
    }
}
