//! Random nested proofs and a naive linearizer to compare against.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use certkernel_core::TermStore;
use certkernel_kernel::{Certificate, ClauseId, Step};
use certkernel_preproc::{NestedProof, Premise};
use rand::Rng;

use crate::mutate::mutate_cert;

/// Rebuilds the cone of the last step of `cert` as a tree. Steps used more
/// than once, and some used once, become let-bound lemmas; other premises
/// are inlined. Premises that are not earlier step ids are kept as input
/// references.
pub fn to_nested<R: Rng>(
    rng: &mut R,
    cert: &Certificate,
    num_inputs: usize,
) -> Option<NestedProof> {
    let by_id: HashMap<u32, &Step> = cert.steps.iter().map(|s| (s.id.0, s)).collect();
    let root = cert.steps.last()?.id.0;
    let is_step = |p: ClauseId, user: u32| {
        p.0 as usize >= num_inputs && p.0 < user && by_id.contains_key(&p.0)
    };
    // cone and use counts
    let mut uses: HashMap<u32, usize> = HashMap::new();
    let mut cone = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if !cone.insert(id) {
            continue;
        }
        for &p in &by_id[&id].premises {
            if is_step(p, id) {
                *uses.entry(p.0).or_default() += 1;
                stack.push(p.0);
            }
        }
    }
    let bound: BTreeSet<u32> = cone
        .iter()
        .copied()
        .filter(|&id| id != root && (uses.get(&id).copied().unwrap_or(0) > 1 || rng.gen_bool(0.2)))
        .collect();
    fn tree(
        id: u32,
        by_id: &HashMap<u32, &Step>,
        bound: &BTreeSet<u32>,
        is_step: &dyn Fn(ClauseId, u32) -> bool,
    ) -> NestedProof {
        let s = by_id[&id];
        let premises = s
            .premises
            .iter()
            .map(|&p| {
                if !is_step(p, id) {
                    Premise::Input(p)
                } else if bound.contains(&p.0) {
                    Premise::Ref(format!("L{}", p.0))
                } else {
                    Premise::Proof(Box::new(tree(p.0, by_id, bound, is_step)))
                }
            })
            .collect();
        NestedProof::Step {
            rule: s.rule,
            premises,
            payload: s.payload.clone(),
        }
    }
    let mut np = tree(root, &by_id, &bound, &is_step);
    for &id in bound.iter().rev() {
        np = NestedProof::Let {
            name: format!("L{id}"),
            proof: Box::new(tree(id, &by_id, &bound, &is_step)),
            body: Box::new(np),
        };
    }
    Some(np)
}

/// A nested rendering of `cert`, sometimes corrupted first, sometimes with
/// a dangling reference or a re-bound name.
pub fn random_nested<R: Rng>(
    rng: &mut R,
    store: &TermStore,
    cert: &Certificate,
    num_inputs: usize,
) -> Option<NestedProof> {
    let cert = if rng.gen_bool(0.4) {
        mutate_cert(rng, store, cert, num_inputs)
    } else {
        cert.clone()
    };
    let np = to_nested(rng, &cert, num_inputs)?;
    Some(match rng.gen_range(0..20) {
        0 => NestedProof::Let {
            name: "X".into(),
            proof: Box::new(NestedProof::Ref("missing".into())),
            body: Box::new(np),
        },
        1 => NestedProof::Let {
            name: "L0".into(),
            proof: Box::new(np.clone()),
            body: Box::new(NestedProof::Let {
                name: "L0".into(),
                proof: Box::new(np),
                body: Box::new(NestedProof::Ref("L0".into())),
            }),
        },
        2 => NestedProof::Let {
            name: "R".into(),
            proof: Box::new(np),
            body: Box::new(NestedProof::Ref("R".into())),
        },
        _ => np,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceError(pub String);

/// A binding and the scope its proof was written in.
struct Binding<'a> {
    name: &'a str,
    proof: &'a NestedProof,
    outer: Scope<'a>,
}

type Scope<'a> = Option<Rc<Binding<'a>>>;

fn lookup<'a>(scope: &Scope<'a>, name: &str) -> Option<Rc<Binding<'a>>> {
    let mut cur = scope.clone();
    while let Some(b) = cur {
        if b.name == name {
            return Some(b);
        }
        cur = b.outer.clone();
    }
    None
}

struct Naive {
    num_inputs: u32,
    steps: Vec<Step>,
}

impl Naive {
    fn emit_ref(&mut self, name: &str, scope: &Scope<'_>) -> Result<ClauseId, ReferenceError> {
        let b = lookup(scope, name).ok_or_else(|| ReferenceError(format!("unbound {name}")))?;
        self.emit(b.proof, &b.outer)
    }

    fn emit<'a>(
        &mut self,
        p: &'a NestedProof,
        scope: &Scope<'a>,
    ) -> Result<ClauseId, ReferenceError> {
        match p {
            NestedProof::Ref(name) => self.emit_ref(name, scope),
            NestedProof::Let { name, proof, body } => {
                if lookup(scope, name).is_some() {
                    return Err(ReferenceError(format!("rebound {name}")));
                }
                self.emit(proof, scope)?;
                let inner = Some(Rc::new(Binding {
                    name,
                    proof,
                    outer: scope.clone(),
                }));
                self.emit(body, &inner)
            }
            NestedProof::Step {
                rule,
                premises,
                payload,
            } => {
                let mut ids = Vec::new();
                for prem in premises {
                    ids.push(match prem {
                        Premise::Input(id) if id.0 < self.num_inputs => *id,
                        Premise::Input(id) => return Err(ReferenceError(format!("no input {id}"))),
                        Premise::Ref(name) => self.emit_ref(name, scope)?,
                        Premise::Proof(q) => self.emit(q, scope)?,
                    });
                }
                let id = ClauseId(self.num_inputs + self.steps.len() as u32);
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

/// Linearizes by copying: a let-bound proof is emitted at its binding and
/// again, in full, at every reference.
pub fn reference_linearize(
    np: &NestedProof,
    num_inputs: usize,
) -> Result<Certificate, ReferenceError> {
    let mut n = Naive {
        num_inputs: num_inputs as u32,
        steps: Vec::new(),
    };
    let root = n.emit(np, &None)?;
    Ok(Certificate {
        steps: n.steps,
        qed: Some(root),
    })
}
