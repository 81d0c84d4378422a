//! Structured and textual corruption of problems and certificates.

use certkernel_core::{Clause, Lit, TermId, TermStore};
use certkernel_kernel::{
    BitOp, Certificate, ClauseId, CnfKind, EqRule, LiaPayload, Payload, RowRef, RuleKind, Step,
};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_term<R: Rng>(rng: &mut R, store: &TermStore) -> TermId {
    TermId::from_index(rng.gen_range(0..store.len()))
}

fn random_lit<R: Rng>(rng: &mut R, store: &TermStore) -> Lit {
    Lit::new(random_term(rng, store), rng.gen_bool(0.5))
}

fn tweak_lits<R: Rng>(rng: &mut R, store: &TermStore, lits: &mut Vec<Lit>) {
    match rng.gen_range(0..4) {
        0 if !lits.is_empty() => {
            let i = rng.gen_range(0..lits.len());
            lits[i] = lits[i].negate();
        }
        1 if !lits.is_empty() => {
            lits.remove(rng.gen_range(0..lits.len()));
        }
        2 if !lits.is_empty() => {
            let i = rng.gen_range(0..lits.len());
            lits[i] = random_lit(rng, store);
        }
        _ => lits.push(random_lit(rng, store)),
    }
}

fn other_rule<R: Rng>(rng: &mut R, rule: RuleKind) -> RuleKind {
    match rule {
        RuleKind::Cnf(_) => RuleKind::Cnf(*CnfKind::ALL.choose(rng).expect("non-empty")),
        RuleKind::BbBitwise(_) => RuleKind::BbBitwise(
            *[BitOp::And, BitOp::Or, BitOp::Xor]
                .choose(rng)
                .expect("non-empty"),
        ),
        _ => *[
            RuleKind::Res,
            RuleKind::Euf,
            RuleKind::Lia,
            RuleKind::BbVar,
            RuleKind::BbConst,
            RuleKind::BbNot,
            RuleKind::BbAdd,
            RuleKind::BbEq,
            RuleKind::BbUlt,
            RuleKind::Cnf(CnfKind::AndPos),
        ]
        .choose(rng)
        .expect("non-empty"),
    }
}

fn tweak_payload<R: Rng>(rng: &mut R, store: &TermStore, payload: &mut Payload) {
    match payload {
        Payload::None | Payload::Clause(_) if rng.gen_bool(0.5) => {
            let mut lits = match payload {
                Payload::Clause(l) => l.clone(),
                _ => Vec::new(),
            };
            tweak_lits(rng, store, &mut lits);
            *payload = Payload::Clause(lits);
        }
        Payload::None | Payload::Clause(_) => {}
        Payload::Cnf(c) => match rng.gen_range(0..2) {
            0 => {
                c.index = if rng.gen_bool(0.5) {
                    c.index ^ 1
                } else {
                    rng.gen_range(0..4)
                }
            }
            _ => c.target = random_term(rng, store),
        },
        Payload::Euf(e) => match rng.gen_range(0..3) {
            0 => tweak_lits(rng, store, &mut e.lemma),
            1 if !e.justification.is_empty() => {
                let k = rng.gen_range(0..e.justification.len());
                let s = &mut e.justification[k];
                match &mut s.rule {
                    EqRule::Sym(j) | EqRule::Hyp(j) => *j = rng.gen_range(0..=*j + 1),
                    EqRule::Trans(i, j) => std::mem::swap(i, j),
                    EqRule::Cong(_, js) if !js.is_empty() => js[0] = rng.gen_range(0..=k),
                    _ => s.rule = EqRule::Refl,
                }
            }
            _ if !e.justification.is_empty() => {
                let k = rng.gen_range(0..e.justification.len());
                let t = random_term(rng, store);
                if rng.gen_bool(0.5) {
                    e.justification[k].lhs = t;
                } else {
                    e.justification[k].rhs = t;
                }
            }
            _ => e.justification.clear(),
        },
        Payload::Lia(l) => match rng.gen_range(0..3) {
            0 => tweak_lits(rng, store, &mut l.lemma),
            1 => {
                if let Some(t) = tweak_combination(rng, l) {
                    *l = t;
                }
            }
            _ => match &mut l.cut {
                Some(rows) if !rows.is_empty() => rows[0].1 += BigInt::from(rng.gen_range(-2..=2)),
                _ => l.cut = Some(vec![(0, BigInt::from(1))]),
            },
        },
        Payload::Bv(b) => match rng.gen_range(0..3) {
            0 => b.target = random_term(rng, store),
            1 if !b.aux.is_empty() => {
                let i = rng.gen_range(0..b.aux.len());
                b.aux[i] = random_term(rng, store);
            }
            _ => {
                b.aux.reverse();
                b.aux.push(random_term(rng, store));
            }
        },
    }
}

/// Changes one multiplier of the final combination by a non-zero amount.
/// Any such change leaves a non-zero row sum behind, so the result must be
/// refused whenever every hypothesis row is non-zero.
pub fn tweak_combination<R: Rng>(rng: &mut R, payload: &LiaPayload) -> Option<LiaPayload> {
    if payload.combination.is_empty() {
        return None;
    }
    let mut out = payload.clone();
    let i = rng.gen_range(0..out.combination.len());
    let delta = *[-2, -1, 1, 2].choose(rng).expect("non-empty");
    out.combination[i].1 += BigInt::from(delta);
    if matches!(out.combination[i].0, RowRef::Cut) && out.cut.is_none() {
        return None;
    }
    Some(out)
}

/// One to three random edits of steps: premises, rules, payloads, order,
/// deletion, or a step turned into an `assume`.
pub fn mutate_cert<R: Rng>(
    rng: &mut R,
    store: &TermStore,
    cert: &Certificate,
    num_inputs: usize,
) -> Certificate {
    let mut c = cert.clone();
    for _ in 0..rng.gen_range(1..=3) {
        if c.steps.is_empty() {
            break;
        }
        let k = rng.gen_range(0..c.steps.len());
        let step_id = c.steps[k].id.0;
        match rng.gen_range(0..9) {
            0 | 1 => {
                let s = &mut c.steps[k];
                if s.premises.is_empty() || step_id == 0 {
                    s.premises.push(ClauseId(rng.gen_range(0..step_id.max(1))));
                } else {
                    let i = rng.gen_range(0..s.premises.len());
                    s.premises[i] = ClauseId(rng.gen_range(0..step_id));
                }
            }
            2 => {
                let s = &mut c.steps[k];
                if rng.gen_bool(0.5) {
                    s.premises.reverse();
                } else if !s.premises.is_empty() {
                    let i = rng.gen_range(0..s.premises.len());
                    if rng.gen_bool(0.5) {
                        s.premises.remove(i);
                    } else {
                        let p = s.premises[i];
                        s.premises.insert(i, p);
                    }
                }
            }
            3 => c.steps[k].rule = other_rule(rng, c.steps[k].rule),
            4 | 5 => tweak_payload(rng, store, &mut c.steps[k].payload),
            6 => {
                // delete and renumber
                c.steps.remove(k);
                for s in &mut c.steps[k..] {
                    s.id.0 -= 1;
                    for p in &mut s.premises {
                        if p.0 > step_id {
                            p.0 -= 1;
                        } else if p.0 == step_id {
                            p.0 = rng.gen_range(0..step_id);
                        }
                    }
                }
            }
            7 if k + 1 < c.steps.len() => {
                c.steps.swap(k, k + 1);
                let (a, b) = (c.steps[k].id, c.steps[k + 1].id);
                c.steps[k].id = b;
                c.steps[k + 1].id = a;
            }
            _ => {
                let mut lits = match &c.steps[k].payload {
                    Payload::Euf(e) => e.lemma.clone(),
                    Payload::Lia(l) => l.lemma.clone(),
                    _ => Vec::new(),
                };
                tweak_lits(rng, store, &mut lits);
                c.steps[k] = Step {
                    id: c.steps[k].id,
                    rule: RuleKind::Assume,
                    premises: Vec::new(),
                    payload: Payload::Clause(lits),
                };
            }
        }
    }
    let _ = num_inputs;
    c.qed = c.steps.last().map(|s| s.id);
    c
}

/// Flips, drops or replaces one input literal, or drops a whole clause.
pub fn mutate_inputs<R: Rng>(rng: &mut R, store: &TermStore, inputs: &[Clause]) -> Vec<Clause> {
    let mut out = inputs.to_vec();
    if out.is_empty() {
        return out;
    }
    let i = rng.gen_range(0..out.len());
    if rng.gen_bool(0.15) && out.len() > 1 {
        out.remove(i);
        return out;
    }
    let mut lits = out[i].lits().to_vec();
    let atoms: Vec<TermId> = inputs
        .iter()
        .flat_map(|c| c.lits().iter().map(|l| l.atom()))
        .collect();
    match rng.gen_range(0..3) {
        0 if !lits.is_empty() => {
            let j = rng.gen_range(0..lits.len());
            lits[j] = lits[j].negate();
        }
        1 if lits.len() > 1 => {
            lits.remove(rng.gen_range(0..lits.len()));
        }
        _ if !atoms.is_empty() => lits.push(Lit::new(
            *atoms.choose(rng).expect("non-empty"),
            rng.gen_bool(0.5),
        )),
        _ => tweak_lits(rng, store, &mut lits),
    }
    out[i] = Clause::from_lits(lits);
    out
}

const NOISE: &[u8] = b"()(){}{}[] \n;|\"#-0123456789abcxyzqed res cl neg";

fn token_spans(text: &[u8]) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let c = text[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if b"(){}".contains(&c) {
            spans.push((i, i + 1));
            i += 1;
        } else {
            let start = i;
            while i < text.len() && !text[i].is_ascii_whitespace() && !b"(){}".contains(&text[i]) {
                i += 1;
            }
            spans.push((start, i));
        }
    }
    spans
}

/// A random byte-, token- or line-level corruption of `text`. The result
/// need not be valid UTF-8.
pub fn mutate_text<R: Rng>(rng: &mut R, text: &[u8]) -> Vec<u8> {
    let mut t = text.to_vec();
    let edits = if rng.gen_bool(0.8) {
        1
    } else {
        rng.gen_range(2..=6)
    };
    for _ in 0..edits {
        let len = t.len();
        match rng.gen_range(0..12) {
            0 if len > 0 => {
                t.remove(rng.gen_range(0..len));
            }
            1 => {
                let c = NOISE[rng.gen_range(0..NOISE.len())];
                t.insert(rng.gen_range(0..=len), c);
            }
            2 if len > 0 => {
                let i = rng.gen_range(0..len);
                t[i] = if rng.gen_bool(0.1) {
                    rng.gen()
                } else {
                    NOISE[rng.gen_range(0..NOISE.len())]
                };
            }
            3..=6 => {
                let spans = token_spans(&t);
                if spans.is_empty() {
                    continue;
                }
                let (s, e) = spans[rng.gen_range(0..spans.len())];
                let tok = t[s..e].to_vec();
                let replacement: Vec<u8> = match rng.gen_range(0..6) {
                    0 => Vec::new(),
                    1 => [tok.as_slice(), b" ", tok.as_slice()].concat(),
                    2 => {
                        let (s2, e2) = spans[rng.gen_range(0..spans.len())];
                        t[s2..e2].to_vec()
                    }
                    _ => match std::str::from_utf8(&tok)
                        .ok()
                        .and_then(|x| x.parse::<i64>().ok())
                    {
                        Some(n) => {
                            let m = match rng.gen_range(0..6) {
                                0 => (n + 1).to_string(),
                                1 => (n - 1).to_string(),
                                2 => "0".to_string(),
                                3 => (-n).to_string(),
                                4 => "99999999999999999999999".to_string(),
                                _ => rng.gen_range(0..64).to_string(),
                            };
                            m.into_bytes()
                        }
                        None => [tok.as_slice(), b"x"].concat(),
                    },
                };
                t.splice(s..e, replacement);
            }
            7..=9 => {
                let mut lines: Vec<Vec<u8>> =
                    t.split(|&c| c == b'\n').map(|l| l.to_vec()).collect();
                let n = lines.len();
                let i = rng.gen_range(0..n);
                match rng.gen_range(0..3) {
                    0 => {
                        lines.remove(i);
                    }
                    1 => {
                        let l = lines[i].clone();
                        lines.insert(i, l);
                    }
                    _ => {
                        let j = rng.gen_range(0..n);
                        lines.swap(i, j);
                    }
                }
                t = lines.join(&b'\n');
            }
            10 => t.truncate(rng.gen_range(0..=len)),
            _ => {
                let depth = rng.gen_range(1..2000);
                let at = rng.gen_range(0..=len);
                let open = vec![b'('; depth];
                t.splice(at..at, open);
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn text_mutations_change_something() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let src = b"(4 res (0 1) {})\n(5 res (4 2) {})\n";
        let changed = (0..200)
            .filter(|_| mutate_text(&mut rng, src) != src)
            .count();
        assert!(changed > 150);
    }

    #[test]
    fn combination_tweaks_differ() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = LiaPayload {
            lemma: vec![],
            cut: None,
            combination: vec![(RowRef::Hyp(0), BigInt::from(2))],
        };
        let t = tweak_combination(&mut rng, &p).unwrap();
        assert_ne!(t, p);
    }
}
