use certkernel_core::{Lit, Node, Sort, TermId, TermStore};
use certkernel_frontend::Logic;
use certkernel_kernel::{LiaPayload, Payload, RowRef, RuleKind};
use num_bigint::BigInt;
use rand::Rng;

use super::{assert, certify, declare, new_problem, Instance};

/// A Farkas-certified lemma over `vars` and where its rows came from.
#[derive(Debug, Clone)]
pub struct LiaLemma {
    pub payload: LiaPayload,
    /// Whether the lemma needed a cut.
    pub uses_cut: bool,
}

fn linear_term(store: &mut TermStore, vars: &[TermId], coeffs: &[i64]) -> TermId {
    let mut parts = Vec::new();
    for (&x, &c) in vars.iter().zip(coeffs) {
        match c {
            0 => {}
            1 => parts.push(x),
            _ => {
                let k = store.int(c);
                parts.push(store.intern(Node::Mul([k, x])).expect("Int product"));
            }
        }
    }
    match parts.len() {
        0 => store.int(0),
        1 => parts[0],
        _ => store.intern(Node::Add(parts)).expect("Int sum"),
    }
}

/// A lemma literal whose negation is `coeffs·x >= b`, or `coeffs·x = b` when
/// `eq` holds, in one of several surface forms.
fn row_literal<R: Rng>(
    rng: &mut R,
    store: &mut TermStore,
    vars: &[TermId],
    coeffs: &[i64],
    b: i64,
    eq: bool,
) -> Lit {
    let a = linear_term(store, vars, coeffs);
    let node = |n: Node, store: &mut TermStore| store.intern(n).expect("Int comparison");
    if eq {
        let k = store.int(b);
        return Lit::neg(node(Node::Eq([a, k]), store));
    }
    match rng.gen_range(0..4) {
        0 => {
            let k = store.int(b);
            Lit::pos(node(Node::Lt([a, k]), store))
        }
        1 => {
            let k = store.int(b - 1);
            Lit::pos(node(Node::Le([a, k]), store))
        }
        2 => {
            let k = store.int(b);
            Lit::neg(node(Node::Le([k, a]), store))
        }
        _ => {
            let k = store.int(b - 1);
            Lit::neg(node(Node::Lt([k, a]), store))
        }
    }
}

fn small_row<R: Rng>(rng: &mut R, n: usize) -> Vec<i64> {
    loop {
        let row: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        if row.iter().any(|&c| c != 0) {
            return row;
        }
    }
}

/// Random lemma: rows with positive multipliers summing to `0 >= k`, k >= 1,
/// or a pair of rows that only a cut separates.
pub fn lia_lemma<R: Rng>(rng: &mut R, store: &mut TermStore, vars: &[TermId]) -> LiaLemma {
    let n = vars.len();
    if rng.gen_bool(0.25) {
        // g·a·x >= b and g·a·x <= B with b <= B < g·ceil(b/g).
        let a = loop {
            let a = small_row(rng, n);
            if a.iter().fold(0i64, |g, &c| num_integer::gcd(g, c)) == 1 {
                break a;
            }
        };
        let g = rng.gen_range(2..=4i64);
        let b = loop {
            let b = rng.gen_range(-8..=8i64);
            if b.rem_euclid(g) != 0 {
                break b;
            }
        };
        let upper = g * b.div_euclid(g) + g - 1;
        let big_b = rng.gen_range(b..=upper);
        let ga: Vec<i64> = a.iter().map(|c| g * c).collect();
        let neg_ga: Vec<i64> = ga.iter().map(|c| -c).collect();
        let r0 = row_literal(rng, store, vars, &ga, b, false);
        let r1 = row_literal(rng, store, vars, &neg_ga, -big_b, false);
        let payload = LiaPayload {
            lemma: vec![r0, r1],
            cut: Some(vec![(0, BigInt::from(1))]),
            combination: vec![
                (RowRef::Cut, BigInt::from(g)),
                (RowRef::Hyp(1), BigInt::from(1)),
            ],
        };
        return LiaLemma {
            payload,
            uses_cut: true,
        };
    }
    loop {
        let m = rng.gen_range(2..=4);
        let mut rows: Vec<(Vec<i64>, i64, bool)> = Vec::new();
        let mut lambdas: Vec<i64> = Vec::new();
        let mut sum = vec![0i64; n];
        let mut bound = 0i64;
        for _ in 0..m - 1 {
            let a = small_row(rng, n);
            let eq = rng.gen_bool(0.15);
            let lambda = if eq && rng.gen_bool(0.5) {
                -rng.gen_range(1..=3)
            } else {
                rng.gen_range(1..=3)
            };
            let b = rng.gen_range(-5..=5);
            for (s, c) in sum.iter_mut().zip(&a) {
                *s += lambda * c;
            }
            bound += lambda * b;
            rows.push((a, b, eq));
            lambdas.push(lambda);
        }
        let last: Vec<i64> = sum.iter().map(|s| -s).collect();
        if last.iter().all(|&c| c == 0) {
            continue;
        }
        let b_last = 1 - bound + rng.gen_range(0..=2);
        rows.push((last, b_last, false));
        lambdas.push(1);
        let lemma: Vec<Lit> = rows
            .iter()
            .map(|(a, b, eq)| row_literal(rng, store, vars, a, *b, *eq))
            .collect();
        // Rows must be distinct literals for the lemma to keep its shape.
        let mut atoms: Vec<TermId> = lemma.iter().map(|l| l.atom()).collect();
        atoms.sort();
        atoms.dedup();
        if atoms.len() != lemma.len() {
            continue;
        }
        let combination = lambdas
            .iter()
            .enumerate()
            .map(|(i, &l)| (RowRef::Hyp(i), BigInt::from(l)))
            .collect();
        let payload = LiaPayload {
            lemma,
            cut: None,
            combination,
        };
        return LiaLemma {
            payload,
            uses_cut: false,
        };
    }
}

/// The negated literals of a random lemma, asserted.
pub fn lia_instance<R: Rng>(rng: &mut R) -> Instance {
    loop {
        let mut p = new_problem(Logic::QfLia);
        let vars: Vec<TermId> = (0..rng.gen_range(1..=3))
            .map(|i| declare(&mut p, &format!("x{i}"), Sort::Int))
            .collect();
        let lemma = lia_lemma(rng, &mut p.store, &vars);
        let atoms: Vec<TermId> = lemma.payload.lemma.iter().map(|l| l.atom()).collect();
        for lit in &lemma.payload.lemma {
            let t = if lit.is_positive() {
                p.store.not(lit.atom()).expect("Bool atom")
            } else {
                lit.atom()
            };
            assert(&mut p, t);
        }
        let payload = lemma.payload;
        if let Some(inst) = certify(p, move |p, b| {
            b.must(&mut p.store, RuleKind::Lia, vec![], Payload::Lia(payload));
            atoms
        }) {
            return inst;
        }
    }
}
