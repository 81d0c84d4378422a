//! Tree-shaped proofs with let-bound lemmas.
//!
//! ```text
//! (let ((L <proof>) ...) <proof>)
//! (step <rule> (<premise> ...) {<payload>})
//! (ref L)
//! ```
//!
//! A premise is an input clause id, the name of a bound lemma, or an inline
//! proof.

use std::fmt::Write as _;

use certkernel_core::TermStore;
use certkernel_frontend::sexpr::{decode_utf8, read_all, SExpr};
use certkernel_frontend::{
    parse_payload, parse_rule, write_payload, FrontendError, ParseError, Problem,
};
use certkernel_kernel::{ClauseId, Payload, RuleKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Premise {
    Input(ClauseId),
    Ref(String),
    Proof(Box<NestedProof>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NestedProof {
    Step {
        rule: RuleKind,
        premises: Vec<Premise>,
        payload: Payload,
    },
    Let {
        name: String,
        proof: Box<NestedProof>,
        body: Box<NestedProof>,
    },
    Ref(String),
}

impl NestedProof {
    /// Number of tree nodes, counting inline premises.
    pub fn size(&self) -> usize {
        match self {
            NestedProof::Step { premises, .. } => {
                1 + premises
                    .iter()
                    .map(|p| match p {
                        Premise::Proof(q) => q.size(),
                        _ => 0,
                    })
                    .sum::<usize>()
            }
            NestedProof::Let { proof, body, .. } => 1 + proof.size() + body.size(),
            NestedProof::Ref(_) => 1,
        }
    }
}

type Res<T> = Result<T, FrontendError>;

fn perr<T>(e: &SExpr, msg: impl Into<String>) -> Res<T> {
    Err(ParseError::at(e.pos(), msg).into())
}

fn parse_proof(problem: &mut Problem, e: &SExpr) -> Res<NestedProof> {
    let Some(items) = e.list() else {
        return perr(e, "expected (step ...), (let ...) or (ref ...)");
    };
    match (e.head(), items) {
        (Some("ref"), [_, name]) => match name.atom() {
            Some(n) => Ok(NestedProof::Ref(n.into())),
            None => perr(name, "expected a lemma name"),
        },
        (Some("step"), [_, rule, prem, payload]) => {
            let rule = parse_rule(rule)?;
            let Some(prem) = prem.list() else {
                return perr(prem, "expected a premise list");
            };
            let premises = prem
                .iter()
                .map(|p| match p {
                    SExpr::Atom(s, _) if s.bytes().all(|b| b.is_ascii_digit()) => match s.parse() {
                        Ok(n) => Ok(Premise::Input(ClauseId(n))),
                        Err(_) => perr(p, "clause id out of range"),
                    },
                    SExpr::Atom(s, _) => Ok(Premise::Ref(s.clone())),
                    _ => Ok(Premise::Proof(Box::new(parse_proof(problem, p)?))),
                })
                .collect::<Res<_>>()?;
            let payload = parse_payload(problem, rule, payload)?;
            Ok(NestedProof::Step {
                rule,
                premises,
                payload,
            })
        }
        (Some("let"), [_, SExpr::List(bindings, _), body]) => {
            let mut parsed = Vec::with_capacity(bindings.len());
            for b in bindings {
                match b.list() {
                    Some([name, proof]) if name.atom().is_some() => {
                        let name = name.atom().unwrap_or_default().to_string();
                        parsed.push((name, parse_proof(problem, proof)?));
                    }
                    _ => return perr(b, "expected (name proof)"),
                }
            }
            if parsed.is_empty() {
                return perr(e, "let needs at least one binding");
            }
            let mut acc = parse_proof(problem, body)?;
            for (name, proof) in parsed.into_iter().rev() {
                acc = NestedProof::Let {
                    name,
                    proof: Box::new(proof),
                    body: Box::new(acc),
                };
            }
            Ok(acc)
        }
        _ => perr(e, "expected (step ...), (let ...) or (ref ...)"),
    }
}

/// Parses one nested proof; payload terms are interned into `problem`.
pub fn parse_nested(bytes: &[u8], problem: &mut Problem) -> Res<NestedProof> {
    let text = decode_utf8(bytes)?;
    let items = read_all(text)?;
    match items.as_slice() {
        [one] => parse_proof(problem, one),
        [] => Err(ParseError {
            line: 1,
            col: 1,
            message: "empty proof".into(),
        }
        .into()),
        [_, extra, ..] => perr(extra, "expected a single proof"),
    }
}

fn write_nested(store: &TermStore, p: &NestedProof, out: &mut String) {
    match p {
        NestedProof::Ref(n) => {
            let _ = write!(out, "(ref {n})");
        }
        NestedProof::Let { name, proof, body } => {
            let _ = write!(out, "(let (({name} ");
            write_nested(store, proof, out);
            out.push_str(")) ");
            write_nested(store, body, out);
            out.push(')');
        }
        NestedProof::Step {
            rule,
            premises,
            payload,
        } => {
            let _ = write!(out, "(step {rule} (");
            for (k, prem) in premises.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                match prem {
                    Premise::Input(id) => {
                        let _ = write!(out, "{id}");
                    }
                    Premise::Ref(n) => out.push_str(n),
                    Premise::Proof(q) => write_nested(store, q, out),
                }
            }
            out.push_str(") ");
            write_payload(store, *rule, payload, out);
            out.push(')');
        }
    }
}

pub fn print_nested(store: &TermStore, p: &NestedProof) -> String {
    let mut s = String::new();
    write_nested(store, p, &mut s);
    s
}
