use certkernel_frontend::Dimacs;
use certkernel_kernel::{Certificate, ClauseId, Payload, RuleKind, Step};

/// An implication chain `x1, x1 -> x2, ..., xn -> xn+1, -xn+1` and its
/// linear refutation.
#[derive(Debug, Clone)]
pub struct ChainProblem {
    pub dimacs: Dimacs,
    pub cert: Certificate,
}

/// A pure-resolution certificate with exactly `steps` steps (at least 2).
pub fn resolution_chain(steps: usize) -> ChainProblem {
    let n = steps.max(2) - 1;
    let mut clauses = vec![vec![1]];
    clauses.extend((1..=n as i32).map(|i| vec![-i, i + 1]));
    clauses.push(vec![-(n as i32 + 1)]);
    let num_inputs = clauses.len() as u32;
    let mut cert = Certificate::default();
    let mut prev = ClauseId(0);
    for k in 1..=n as u32 + 1 {
        let id = ClauseId(num_inputs + k - 1);
        cert.steps.push(Step {
            id,
            rule: RuleKind::Res,
            premises: vec![prev, ClauseId(k)],
            payload: Payload::None,
        });
        prev = id;
    }
    cert.qed = Some(prev);
    ChainProblem {
        dimacs: Dimacs {
            num_vars: n as u32 + 1,
            clauses,
        },
        cert,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use certkernel_kernel::check;

    #[test]
    fn small_chain_is_valid() {
        let c = resolution_chain(10);
        assert_eq!(c.cert.steps.len(), 10);
        let mut p = c.dimacs.to_problem();
        let r = check(&mut p.store, &p.inputs, &c.cert);
        assert!(r.verdict.is_valid());
        assert_eq!(r.empty_at, c.cert.qed);
    }
}
