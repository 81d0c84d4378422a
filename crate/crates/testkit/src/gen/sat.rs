use certkernel_frontend::Dimacs;
use rand::seq::index::sample;
use rand::Rng;

use super::{certify, Instance};

/// Random CNF with `num_vars` variables and clauses of width 1..=3, mostly 3.
pub fn random_cnf<R: Rng>(rng: &mut R, num_vars: u32, num_clauses: usize) -> Dimacs {
    let clauses = (0..num_clauses)
        .map(|_| {
            let width = match rng.gen_range(0..10) {
                0 => 2,
                _ => 3,
            }
            .min(num_vars as usize);
            sample(rng, num_vars as usize, width)
                .into_iter()
                .map(|v| {
                    if rng.gen_bool(0.5) {
                        v as i32 + 1
                    } else {
                        -(v as i32 + 1)
                    }
                })
                .collect()
        })
        .collect();
    Dimacs { num_vars, clauses }
}

/// An unsatisfiable random 3-CNF near the satisfiability threshold.
pub fn sat_instance<R: Rng>(rng: &mut R) -> Instance {
    loop {
        let n = rng.gen_range(3..=10);
        let m = (n as f64 * rng.gen_range(4.3..6.0)) as usize;
        let problem = random_cnf(rng, n, m).to_problem();
        if let Some(inst) = certify(problem, |_, _| Vec::new()) {
            return inst;
        }
    }
}
