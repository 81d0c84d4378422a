use certkernel_core::{Node, Sort, TermId, TermStore};
use certkernel_frontend::Logic;
use rand::Rng;

use super::{assert, certify, declare, new_problem, Instance};

/// Random Boolean formula over `vars` using every connective.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    store: &mut TermStore,
    vars: &[TermId],
    depth: u32,
) -> TermId {
    if depth == 0 || rng.gen_bool(0.25) {
        return vars[rng.gen_range(0..vars.len())];
    }
    let sub = |rng: &mut R, store: &mut TermStore| random_formula(rng, store, vars, depth - 1);
    let node = match rng.gen_range(0..7) {
        0 => Node::Not(sub(rng, store)),
        1 => Node::And((0..rng.gen_range(2..=3)).map(|_| sub(rng, store)).collect()),
        2 => Node::Or((0..rng.gen_range(2..=3)).map(|_| sub(rng, store)).collect()),
        3 => Node::Implies([sub(rng, store), sub(rng, store)]),
        4 => Node::Xor([sub(rng, store), sub(rng, store)]),
        5 => Node::Iff([sub(rng, store), sub(rng, store)]),
        _ => Node::Ite([sub(rng, store), sub(rng, store), sub(rng, store)]),
    };
    store
        .intern(node)
        .expect("Boolean connectives over Bool terms")
}

/// Unsatisfiable conjunction of random non-clausal formulas.
pub fn prop_instance<R: Rng>(rng: &mut R) -> Instance {
    loop {
        let mut p = new_problem(Logic::QfUf);
        let vars: Vec<TermId> = (0..rng.gen_range(2..=4))
            .map(|i| declare(&mut p, &format!("x{i}"), Sort::Bool))
            .collect();
        for _ in 0..rng.gen_range(2..=5) {
            let f = random_formula(rng, &mut p.store, &vars, 3);
            assert(&mut p, f);
        }
        if let Some(inst) = certify(p, move |_, _| vars) {
            return inst;
        }
    }
}
