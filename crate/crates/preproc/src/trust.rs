use certkernel_core::Lit;
use certkernel_kernel::{Certificate, ClauseId, Payload, RuleKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustEntry {
    pub step: ClauseId,
    /// The assumed literals as written.
    pub clause: Vec<Lit>,
}

/// Clauses a certificate takes without proof.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrustReport {
    pub assumed: Vec<TrustEntry>,
}

impl TrustReport {
    pub fn is_empty(&self) -> bool {
        self.assumed.is_empty()
    }
}

pub fn extract_trust(cert: &Certificate) -> TrustReport {
    let assumed = cert
        .steps
        .iter()
        .filter(|s| s.rule == RuleKind::Assume)
        .filter_map(|s| match &s.payload {
            Payload::Clause(lits) => Some(TrustEntry {
                step: s.id,
                clause: lits.clone(),
            }),
            _ => None,
        })
        .collect();
    TrustReport { assumed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use certkernel_frontend::{parse_certificate, parse_smt2};

    #[test]
    fn lists_assumptions_verbatim() {
        let src = "(set-logic QF_BV)(declare-const x (_ BitVec 2))(assert (bvult x x))";
        let mut p = parse_smt2(src.as_bytes()).unwrap();
        let cert = parse_certificate(
            b"1 assume () {(cl (neg (bvult x x)))}\n2 res (0 1) {}\n",
            &mut p,
        )
        .unwrap();
        let r = extract_trust(&cert);
        assert_eq!(r.assumed.len(), 1);
        assert_eq!(r.assumed[0].step, ClauseId(1));
        assert!(!r.assumed[0].clause[0].is_positive());
        let none = parse_certificate(b"1 res (0 0) {}\n", &mut p).unwrap();
        assert!(extract_trust(&none).is_empty());
    }
}
