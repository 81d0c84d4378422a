use std::collections::HashMap;

use certkernel_kernel::{Certificate, ClauseId, Step};
use thiserror::Error;

use crate::nested::{NestedProof, Premise};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearizeError {
    #[error("unbound lemma name `{0}`")]
    UnboundName(String),
    #[error("lemma name `{0}` is bound twice")]
    Shadowed(String),
    #[error("input clause {0} does not exist")]
    NoSuchInput(ClauseId),
}

struct Emitter {
    next: u32,
    num_inputs: u32,
    steps: Vec<Step>,
    bound: HashMap<String, ClauseId>,
}

impl Emitter {
    fn emit(&mut self, p: &NestedProof) -> Result<ClauseId, LinearizeError> {
        match p {
            NestedProof::Ref(name) => self
                .bound
                .get(name)
                .copied()
                .ok_or_else(|| LinearizeError::UnboundName(name.clone())),
            NestedProof::Let { name, proof, body } => {
                if self.bound.contains_key(name) {
                    return Err(LinearizeError::Shadowed(name.clone()));
                }
                let id = self.emit(proof)?;
                self.bound.insert(name.clone(), id);
                let r = self.emit(body);
                self.bound.remove(name);
                r
            }
            NestedProof::Step {
                rule,
                premises,
                payload,
            } => {
                let mut ids = Vec::with_capacity(premises.len());
                for prem in premises {
                    ids.push(match prem {
                        Premise::Input(id) if id.0 < self.num_inputs => *id,
                        Premise::Input(id) => return Err(LinearizeError::NoSuchInput(*id)),
                        Premise::Ref(name) => self.emit(&NestedProof::Ref(name.clone()))?,
                        Premise::Proof(q) => self.emit(q)?,
                    });
                }
                let id = ClauseId(self.next);
                self.next += 1;
                self.steps.push(Step {
                    id,
                    rule: *rule,
                    premises: ids,
                    payload: payload.clone(),
                });
                Ok(id)
            }
        }
    }
}

/// Flattens a nested proof into a linear certificate whose first step id is
/// `num_inputs`. Each let-bound lemma is emitted once, before its body, and
/// every reference to it becomes a premise id. The root's clause is named by
/// `qed`.
pub fn linearize(np: &NestedProof, num_inputs: usize) -> Result<Certificate, LinearizeError> {
    let mut e = Emitter {
        next: num_inputs as u32,
        num_inputs: num_inputs as u32,
        steps: Vec::new(),
        bound: HashMap::new(),
    };
    let root = e.emit(np)?;
    Ok(Certificate {
        steps: e.steps,
        qed: Some(root),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nested::parse_nested;
    use certkernel_frontend::parse_dimacs;
    use certkernel_kernel::check;

    #[test]
    fn shared_lemma_is_emitted_once() {
        let mut p = parse_dimacs(b"p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n").unwrap();
        let src = "(let ((A (step res (0 1) {})) (B (step res (2 3) {}))) (step res (A B) {}))";
        let np = parse_nested(src.as_bytes(), &mut p).unwrap();
        let cert = linearize(&np, p.inputs.len()).unwrap();
        assert_eq!(cert.steps.len(), 3);
        assert_eq!(cert.steps[2].premises, vec![ClauseId(4), ClauseId(5)]);
        assert_eq!(cert.qed, Some(ClauseId(6)));
        assert!(check(&mut p.store, &p.inputs, &cert).verdict.is_valid());

        let twice = "(let ((A (step res (0 1) {}))) (step res (A (step res (A 3) {})) {}))";
        let np = parse_nested(twice.as_bytes(), &mut p).unwrap();
        let cert = linearize(&np, p.inputs.len()).unwrap();
        assert_eq!(cert.steps.len(), 3);
    }

    #[test]
    fn errors() {
        let mut p = parse_dimacs(b"p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let cases = [
            (
                "(step res (L 1) {})",
                LinearizeError::UnboundName("L".into()),
            ),
            (
                "(let ((L (step res (0 1) {}))) (let ((L (ref L))) (ref L)))",
                LinearizeError::Shadowed("L".into()),
            ),
            (
                "(step res (0 7) {})",
                LinearizeError::NoSuchInput(ClauseId(7)),
            ),
        ];
        for (src, want) in cases {
            let np = parse_nested(src.as_bytes(), &mut p).unwrap();
            assert_eq!(linearize(&np, 2), Err(want));
        }
        let scoped = "(step res ((let ((L (step res (0 1) {}))) (ref L)) L) {})";
        let np = parse_nested(scoped.as_bytes(), &mut p).unwrap();
        assert_eq!(
            linearize(&np, 2),
            Err(LinearizeError::UnboundName("L".into()))
        );
    }
}
