use std::collections::HashMap;

use certkernel_frontend::Problem;
use certkernel_kernel::{Certificate, ClauseId, Step};

use crate::builder::ProofBuilder;
use crate::dpll::refute;
use crate::gen::bitblast;
use crate::tseitin::clausify;

/// Turns theory lemmas into a full refutation: replays `hints` (renumbered
/// after the inputs), optionally bit-blasts every bit-vector atom, adds the
/// Tseitin lemmas and searches for a resolution proof.
pub fn complete(problem: &mut Problem, hints: &[Step], blast: bool) -> Result<Certificate, String> {
    let num_inputs = problem.inputs.len();
    let mut b = ProofBuilder::new(&problem.store, &problem.inputs);
    let mut renumber: HashMap<ClauseId, ClauseId> = HashMap::new();
    for step in hints {
        let premises = step
            .premises
            .iter()
            .map(|p| {
                if p.index() < num_inputs {
                    Ok(*p)
                } else {
                    renumber
                        .get(p)
                        .copied()
                        .ok_or(format!("hint {}: unknown premise {p}", step.id))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let id = b
            .step(
                &mut problem.store,
                step.rule,
                premises,
                step.payload.clone(),
            )
            .map_err(|why| format!("hint {} ({}) refused: {why}", step.id, step.rule))?;
        renumber.insert(step.id, id);
    }
    let priority = if blast {
        bitblast(problem, &mut b)
    } else {
        Vec::new()
    };
    if !b.is_finished() {
        clausify(&mut problem.store, &mut b);
        refute(&mut problem.store, &mut b, &priority)
            .map_err(|_| "no refutation: the clauses are satisfiable".to_string())?;
    }
    Ok(b.finish())
}
