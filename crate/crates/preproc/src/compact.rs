use std::collections::HashMap;

use certkernel_core::{Clause, TermStore};
use certkernel_kernel::{check, Certificate, ClauseId, RuleKind, Step};

/// Drops steps that do not contribute to the first derived empty clause and
/// renumbers the rest densely.
///
/// The certificate is replayed to find that clause. A certificate that does
/// not derive it is returned unchanged. `assume` steps replayed before it
/// are kept so that a trusted verdict stays trusted.
pub fn compact(store: &mut TermStore, inputs: &[Clause], cert: &Certificate) -> Certificate {
    let result = check(store, inputs, cert);
    let Some(empty_at) = result.empty_at.filter(|_| result.verdict.derived_empty()) else {
        return cert.clone();
    };
    let k = inputs.len();
    if empty_at.index() < k {
        return Certificate {
            steps: vec![],
            qed: Some(empty_at),
        };
    }
    let last = empty_at.index() - k;
    let steps = &cert.steps[..=last];
    let mut live = vec![false; steps.len()];
    live[last] = true;
    for (i, s) in steps.iter().enumerate() {
        if s.rule == RuleKind::Assume {
            live[i] = true;
        }
    }
    for i in (0..steps.len()).rev() {
        if live[i] {
            for p in &steps[i].premises {
                if p.index() >= k {
                    live[p.index() - k] = true;
                }
            }
        }
    }
    let mut renumber: HashMap<ClauseId, ClauseId> = HashMap::new();
    let mut out = Vec::new();
    for (i, s) in steps.iter().enumerate().filter(|(i, _)| live[*i]) {
        let id = ClauseId((k + out.len()) as u32);
        renumber.insert(ClauseId((k + i) as u32), id);
        let premises = s
            .premises
            .iter()
            .map(|p| if p.index() < k { *p } else { renumber[p] })
            .collect();
        out.push(Step {
            id,
            rule: s.rule,
            premises,
            payload: s.payload.clone(),
        });
    }
    let qed = out.last().map(|s| s.id);
    Certificate { steps: out, qed }
}
