use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use certkernel_cli::run;
use certkernel_core::{Clause, Node, Sort, TermId, TermStore};
use certkernel_frontend::{parse_certificate, print_certificate, print_dimacs, Problem};
use certkernel_kernel::lia::try_check_lia;
use certkernel_kernel::res::try_cnf_lemma;
use certkernel_kernel::{
    check, BitOp, BvPayload, Certificate, Checker, ClauseId, CnfKind, CnfPayload, Payload,
    RuleKind, Step, StepOutcome,
};
use certkernel_oracle::{
    brute_unsat, clause_valid, eval, eval_clause, implied, Model, Outcome, Value,
};
use certkernel_preproc::{compact, linearize};
use certkernel_testkit::gen::{generate, lia_lemma, random_formula, Instance, Theory};
use certkernel_testkit::mutate::{mutate_cert, mutate_inputs, mutate_text, tweak_combination};
use certkernel_testkit::nested::{random_nested, reference_linearize};
use certkernel_testkit::{lemmas_for, resolution_chain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::support::{atom_count, record_extension, skeleton, substitute_clause, BUDGET};
use crate::Verdict;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn first<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.first()
        .map(|x| format!("; first: {x}"))
        .unwrap_or_default()
}

/// Valid verdicts on generated pairs must come with an unsatisfiable
/// problem. Pairs are genuine certificates, mutated certificates, and
/// genuine certificates against mutated inputs.
pub fn soundness() -> Verdict {
    const PAIRS: usize = 10_000;
    // share of Valid verdicts the oracle may fail to decide
    const MAX_UNDECIDED: f64 = 0.01;
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, theory) in Theory::ALL.into_iter().enumerate() {
        let mut rng = rng(0x0100 + k as u64);
        let (mut pairs, mut valid, mut unsat, mut undecided, mut unsound) =
            (0usize, 0usize, 0usize, 0usize, 0usize);
        while pairs < PAIRS {
            let Instance { problem: p, cert } = generate(theory, &mut rng);
            let n = p.inputs.len();
            let mut candidates = vec![(p.inputs.clone(), cert.clone())];
            for _ in 0..2 {
                candidates.push((p.inputs.clone(), mutate_cert(&mut rng, &p.store, &cert, n)));
            }
            candidates.push((mutate_inputs(&mut rng, &p.store, &p.inputs), cert.clone()));
            for (inputs, cert) in candidates {
                pairs += 1;
                let mut store = p.store.clone();
                if !check(&mut store, &inputs, &cert).verdict.is_valid() {
                    continue;
                }
                valid += 1;
                match brute_unsat(&store, &inputs, BUDGET) {
                    Outcome::Unsat => unsat += 1,
                    Outcome::Sat(_) => unsound += 1,
                    Outcome::Exhausted => undecided += 1,
                }
            }
        }
        pass &= unsound == 0 && (undecided as f64) <= MAX_UNDECIDED * valid as f64;
        parts.push(format!(
            "{} {pairs} pairs/{valid} valid/{unsat} unsat/{undecided} undecided/{unsound} unsound",
            theory.name()
        ));
    }
    Verdict::new(pass, parts.join(", "))
}

fn bucket(rule: RuleKind) -> Option<&'static str> {
    match rule {
        RuleKind::Cnf(_) => Some("cnf"),
        RuleKind::Assume | RuleKind::Input => None,
        r => Some(r.name()),
    }
}

const CHECKERS: [&str; 13] = [
    "res", "cnf", "euf", "lia", "bb_var", "bb_const", "bb_not", "bb_and", "bb_or", "bb_xor",
    "bb_add", "bb_eq", "bb_ult",
];

struct StepLocal {
    counts: BTreeMap<&'static str, usize>,
    skipped: usize,
    violations: Vec<String>,
}

impl StepLocal {
    const TARGET: usize = 1000;

    fn needs(&self, theory: Theory) -> bool {
        let wanted: &[&str] = match theory {
            Theory::Sat => &["res"],
            Theory::Prop => &["res", "cnf"],
            Theory::Euf => &["euf"],
            Theory::Lia => &["lia"],
            Theory::Bv => &CHECKERS[4..],
        };
        wanted.iter().any(|b| self.counts[b] < Self::TARGET)
    }

    /// Replays `cert` and checks each accepted conclusion against its
    /// premises. Fresh bit-blasting variables are replaced by the bits they
    /// stand for, so those conclusions become word-level facts.
    fn replay(&mut self, p: &Problem, cert: &Certificate) {
        let mut store = p.store.clone();
        let mut checker = Checker::new(&store, &p.inputs);
        let mut ext = HashMap::new();
        for step in &cert.steps {
            if checker.is_finished() {
                break;
            }
            let premises: Vec<Clause> = step
                .premises
                .iter()
                .filter_map(|&id| checker.clause(id).cloned())
                .collect();
            if checker.step(&mut store, step) != StepOutcome::Accepted {
                continue;
            }
            let Some(b) = bucket(step.rule) else { continue };
            record_extension(&mut store, step, &mut ext);
            if self.counts[b] >= Self::TARGET {
                continue;
            }
            let conclusion = checker.clause(step.id).expect("stored").clone();
            let verdict = match step.rule {
                RuleKind::Res | RuleKind::Cnf(_) => {
                    let mut all = premises;
                    all.push(conclusion.clone());
                    let (s, cls) = skeleton(&store, &all);
                    let (c, ps) = cls.split_last().expect("conclusion");
                    implied(&s, ps, c, BUDGET)
                }
                RuleKind::Euf | RuleKind::Lia => implied(&store, &premises, &conclusion, BUDGET),
                _ => {
                    let ps: Vec<Clause> = premises
                        .iter()
                        .map(|c| substitute_clause(&mut store, &ext, c))
                        .collect();
                    let c = substitute_clause(&mut store, &ext, &conclusion);
                    implied(&store, &ps, &c, BUDGET)
                }
            };
            match verdict {
                Ok(true) => *self.counts.get_mut(b).expect("known checker") += 1,
                Ok(false) => self
                    .violations
                    .push(format!("{} step {}: {conclusion}", step.rule, step.id)),
                Err(_) => self.skipped += 1,
            }
        }
    }
}

/// Every small checker: accepted conclusions are implied by their premises.
pub fn step_local() -> Verdict {
    const MAX_INSTANCES: usize = 40_000;
    let mut s = StepLocal {
        counts: CHECKERS.iter().map(|&c| (c, 0)).collect(),
        skipped: 0,
        violations: Vec::new(),
    };
    let mut rng = rng(0x0200);
    let mut instances = 0;
    while instances < MAX_INSTANCES && s.counts.values().any(|&n| n < StepLocal::TARGET) {
        for theory in Theory::ALL {
            if !s.needs(theory) {
                continue;
            }
            instances += 1;
            let inst = generate(theory, &mut rng);
            let n = inst.problem.inputs.len();
            let mutant = mutate_cert(&mut rng, &inst.problem.store, &inst.cert, n);
            s.replay(&inst.problem, &inst.cert);
            s.replay(&inst.problem, &mutant);
        }
    }
    let short: Vec<String> = s
        .counts
        .iter()
        .filter(|(_, &n)| n < StepLocal::TARGET)
        .map(|(k, n)| format!("{k}={n}"))
        .collect();
    let pass = s.violations.is_empty() && short.is_empty();
    let mut detail = format!(
        "{} checkers x {} implied conclusions, {} violations, {} over budget, {instances} instances",
        CHECKERS.len(),
        StepLocal::TARGET,
        s.violations.len(),
        s.skipped
    );
    if !short.is_empty() {
        detail += &format!("; short: {}", short.join(" "));
    }
    Verdict::new(pass, detail + &first(&s.violations))
}

fn subterms(store: &TermStore, root: TermId) -> Vec<TermId> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        if seen.insert(t) {
            stack.extend_from_slice(store.node(t).children());
        }
    }
    seen.into_iter().collect()
}

/// Every accepted Tseitin lemma over at most 16 atoms is a tautology.
pub fn cnf_tautologies() -> Verdict {
    const FORMULAS: usize = 4000;
    const MAX_ATOMS: usize = 16;
    const LIMIT_S: f64 = 60.0;
    let started = Instant::now();
    let mut rng = rng(0x0300);
    let (mut checked, mut wide) = (0usize, 0usize);
    let mut kinds = BTreeSet::new();
    let mut bad = Vec::new();
    let mut judge = |store: &TermStore, kind: CnfKind, c: &Clause, bad: &mut Vec<String>| {
        if atom_count(store, c) > MAX_ATOMS {
            wide += 1;
            return;
        }
        let (s, cls) = skeleton(store, std::slice::from_ref(c));
        if clause_valid(&s, &cls[0], BUDGET) != Ok(true) {
            bad.push(format!("{}: {c}", kind.name()));
        }
        kinds.insert(kind.name());
        checked += 1;
    };
    for _ in 0..FORMULAS {
        let mut store = TermStore::new();
        let vars: Vec<TermId> = (0..rng.gen_range(1..=5))
            .map(|i| store.var(&format!("p{i}"), Sort::Bool).expect("fresh"))
            .collect();
        let depth = rng.gen_range(1..=4);
        let f = random_formula(&mut rng, &mut store, &vars, depth);
        let mut targets = subterms(&store, f);
        targets.extend([TermId::TRUE, TermId::FALSE]);
        for t in targets {
            for (kind, index) in lemmas_for(&store, t) {
                match try_cnf_lemma(&store, kind, &CnfPayload { target: t, index }) {
                    Ok(c) => judge(&store, kind, &c, &mut bad),
                    Err(e) => bad.push(format!("{} on {t} refused: {}", kind.name(), e.0)),
                }
            }
        }
    }
    // lemmas as they occur in generated certificates, mutants included
    for theory in Theory::ALL {
        for _ in 0..200 {
            let inst = generate(theory, &mut rng);
            let p = &inst.problem;
            let mutant = mutate_cert(&mut rng, &p.store, &inst.cert, p.inputs.len());
            for cert in [&inst.cert, &mutant] {
                let mut store = p.store.clone();
                let mut checker = Checker::new(&store, &p.inputs);
                for step in &cert.steps {
                    if checker.step(&mut store, step) != StepOutcome::Accepted {
                        continue;
                    }
                    if let RuleKind::Cnf(kind) = step.rule {
                        let c = checker.clause(step.id).expect("stored").clone();
                        judge(&store, kind, &c, &mut bad);
                    }
                }
            }
        }
    }
    let missing: Vec<&str> = CnfKind::ALL
        .iter()
        .map(|k| k.name())
        .filter(|k| !kinds.contains(k))
        .collect();
    let elapsed = started.elapsed().as_secs_f64();
    let pass = bad.is_empty() && missing.is_empty() && elapsed < LIMIT_S;
    let mut detail = format!(
        "{checked} lemmas, {} of {} kinds, {} violations, {wide} over {MAX_ATOMS} atoms, {elapsed:.1} s (limit {LIMIT_S} s)",
        kinds.len(),
        CnfKind::ALL.len(),
        bad.len()
    );
    if !missing.is_empty() {
        detail += &format!("; missing: {}", missing.join(" "));
    }
    Verdict::new(pass, detail + &first(&bad))
}

const OPS: [&str; 7] = ["not", "and", "or", "xor", "add", "eq", "ult"];

/// Word-level semantics against the bit-level encoding for one operation
/// at one width. Returns (cases, mismatches).
fn bitblast_op(w: u32, op: &str) -> (usize, Vec<String>) {
    let mut store = TermStore::new();
    let a = store.var("a", Sort::BitVec(w)).expect("fresh");
    let b = store.var("b", Sort::BitVec(w)).expect("fresh");
    let fresh = |store: &mut TermStore, prefix: &str| -> Vec<TermId> {
        (0..w)
            .map(|i| {
                store
                    .var(&format!("{prefix}{i}"), Sort::Bool)
                    .expect("fresh")
            })
            .collect()
    };
    let (abits, bbits) = (fresh(&mut store, "a.b"), fresh(&mut store, "b.b"));
    let carries = if op == "add" {
        fresh(&mut store, "c")
    } else {
        vec![]
    };
    let (node, rule) = match op {
        "not" => (Node::BvNot(a), RuleKind::BbNot),
        "and" => (Node::BvAnd([a, b]), RuleKind::BbBitwise(BitOp::And)),
        "or" => (Node::BvOr([a, b]), RuleKind::BbBitwise(BitOp::Or)),
        "xor" => (Node::BvXor([a, b]), RuleKind::BbBitwise(BitOp::Xor)),
        "add" => (Node::BvAdd([a, b]), RuleKind::BbAdd),
        "eq" => (Node::Eq([a, b]), RuleKind::BbEq),
        _ => (Node::BvUlt([a, b]), RuleKind::BbUlt),
    };
    let target = store.intern(node).expect("well sorted");
    let mut checker = Checker::new(&store, &[]);
    let mut push = |store: &mut TermStore,
                    rule: RuleKind,
                    premises: &[u32],
                    target: TermId,
                    aux: &[TermId]| {
        let id = checker.next_id();
        let step = Step {
            id,
            rule,
            premises: premises.iter().map(|&p| ClauseId(p)).collect(),
            payload: Payload::Bv(BvPayload {
                target,
                aux: aux.to_vec(),
            }),
        };
        let outcome = checker.step(store, &step);
        (id, outcome)
    };
    let mut mismatches = Vec::new();
    push(&mut store, RuleKind::BbVar, &[], a, &abits);
    push(&mut store, RuleKind::BbVar, &[], b, &bbits);
    let premises: &[u32] = if op == "not" { &[0] } else { &[0, 1] };
    let (id, outcome) = push(&mut store, rule, premises, target, &carries);
    if outcome != StepOutcome::Accepted {
        return (
            0,
            vec![format!("width {w} {op}: step refused: {outcome:?}")],
        );
    }
    let conclusion = checker.clause(id).expect("stored").clone();
    let bits: Vec<TermId> = checker
        .bits()
        .bits(target)
        .map(<[TermId]>::to_vec)
        .unwrap_or_default();
    let bool_of = |m: &Model, t: TermId| {
        eval(&store, m, t).ok().and_then(|v| {
            if let Value::Bool(b) = v {
                Some(b)
            } else {
                None
            }
        })
    };
    let mut cases = 0;
    let b_values = if op == "not" { 1 } else { 1u128 << w };
    for va in 0..1u128 << w {
        for vb in 0..b_values {
            let mut m = Model::default();
            m.vars.insert(a, Value::Bv(va, w));
            m.vars.insert(b, Value::Bv(vb, w));
            for i in 0..w as usize {
                m.vars.insert(abits[i], Value::Bool(va >> i & 1 == 1));
                m.vars.insert(bbits[i], Value::Bool(vb >> i & 1 == 1));
            }
            let word = eval(&store, &m, target);
            let matches_word = |m: &Model| match word {
                Ok(Value::Bv(v, _)) => {
                    bits.len() == w as usize
                        && (0..w as usize).all(|i| bool_of(m, bits[i]) == Some(v >> i & 1 == 1))
                }
                _ => false,
            };
            match op {
                "eq" | "ult" => {
                    cases += 1;
                    if eval_clause(&store, &m, &conclusion) != Ok(true) {
                        mismatches.push(format!("width {w} {op} a={va} b={vb}"));
                    }
                }
                "add" => {
                    let mut satisfying = 0;
                    for vc in 0..1u128 << w {
                        cases += 1;
                        for (i, &c) in carries.iter().enumerate() {
                            m.vars.insert(c, Value::Bool(vc >> i & 1 == 1));
                        }
                        if eval_clause(&store, &m, &conclusion) == Ok(true) {
                            satisfying += 1;
                            if !matches_word(&m) {
                                mismatches
                                    .push(format!("width {w} add a={va} b={vb} carries={vc}"));
                            }
                        }
                    }
                    if satisfying != 1 {
                        mismatches.push(format!(
                            "width {w} add a={va} b={vb}: {satisfying} carry valuations"
                        ));
                    }
                }
                _ => {
                    cases += 1;
                    if !matches_word(&m) {
                        mismatches.push(format!("width {w} {op} a={va} b={vb}"));
                    }
                }
            }
        }
    }
    (cases, mismatches)
}

/// Exhaustive agreement of every bit-blasting rule with word-level
/// evaluation at widths 1 to 4.
pub fn bitblasting() -> Verdict {
    let mut cases = 0;
    let mut bad = Vec::new();
    for w in 1..=4 {
        for op in OPS {
            let (n, m) = bitblast_op(w, op);
            cases += n;
            bad.extend(m);
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!(
            "{cases} cases over {} operations, {} mismatches",
            OPS.len(),
            bad.len()
        ) + &first(&bad),
    )
}

/// Generated Farkas lemmas have no counterexample in the box; one-multiplier
/// corruptions are refused.
pub fn lia() -> Verdict {
    const LEMMAS: usize = 500;
    let mut rng = rng(0x0500);
    let (mut accepted, mut refused, mut counterexamples, mut undecided) = (0, 0, 0, 0);
    let (mut corrupted, mut corrupted_accepted, mut cuts) = (0, 0, 0);
    while accepted < LEMMAS || corrupted < LEMMAS {
        let mut store = TermStore::new();
        let vars: Vec<TermId> = (0..rng.gen_range(1..=3))
            .map(|i| store.var(&format!("x{i}"), Sort::Int).expect("fresh"))
            .collect();
        let lemma = lia_lemma(&mut rng, &mut store, &vars);
        if accepted < LEMMAS {
            match try_check_lia(&store, &lemma.payload) {
                Err(_) => refused += 1,
                Ok(c) => {
                    accepted += 1;
                    cuts += usize::from(lemma.uses_cut);
                    match clause_valid(&store, &c, BUDGET) {
                        Ok(true) => {}
                        Ok(false) => counterexamples += 1,
                        Err(_) => undecided += 1,
                    }
                }
            }
        }
        if corrupted < LEMMAS {
            if let Some(bad) = (0..10).find_map(|_| tweak_combination(&mut rng, &lemma.payload)) {
                corrupted += 1;
                corrupted_accepted += usize::from(try_check_lia(&store, &bad).is_ok());
            }
        }
    }
    let pass = refused == 0 && counterexamples == 0 && undecided == 0 && corrupted_accepted == 0;
    Verdict::new(
        pass,
        format!(
            "{accepted} lemmas ({cuts} with a cut): {refused} refused, {counterexamples} counterexamples, \
             {undecided} undecided; {corrupted} corruptions, {corrupted_accepted} accepted"
        ),
    )
}

/// Mutated certificate text over satisfiable inputs: no panic, never Valid.
pub fn fuzz() -> Verdict {
    const MUTANTS: usize = 100_000;
    const BASES: usize = 250;
    let mut rng = rng(0x0600);
    let mut bases: Vec<(Problem, String)> = Vec::new();
    while bases.len() < BASES {
        let theory = Theory::ALL[bases.len() % Theory::ALL.len()];
        let inst = generate(theory, &mut rng);
        for _ in 0..50 {
            let inputs = mutate_inputs(&mut rng, &inst.problem.store, &inst.problem.inputs);
            if let Outcome::Sat(_) = brute_unsat(&inst.problem.store, &inputs, BUDGET) {
                let mut p = inst.problem.clone();
                p.inputs = inputs;
                let text = print_certificate(&p.store, &inst.cert);
                bases.push((p, text));
                break;
            }
        }
    }
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut panics = Vec::new();
    for i in 0..MUTANTS {
        let (p, text) = &bases[i % BASES];
        let bytes = mutate_text(&mut rng, text.as_bytes());
        let outcome = catch_unwind(AssertUnwindSafe(|| {
            let mut p = p.clone();
            match parse_certificate(&bytes, &mut p) {
                Ok(cert) => check(&mut p.store, &p.inputs, &cert).verdict.label(),
                Err(_) => "PARSE ERROR",
            }
        }));
        match outcome {
            Ok(label) => *counts.entry(label).or_default() += 1,
            Err(_) => panics.push(format!("base {} mutant {i}", i % BASES)),
        }
    }
    std::panic::set_hook(hook);
    let valid = counts.get("VALID").copied().unwrap_or(0);
    let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{} {k}", v)).collect();
    Verdict::new(
        valid == 0 && panics.is_empty(),
        format!(
            "{MUTANTS} mutants over {BASES} satisfiable problems: {}; {} panics",
            summary.join(", "),
            panics.len()
        ) + &first(&panics),
    )
}

fn label(store: &TermStore, inputs: &[Clause], cert: Result<Certificate, String>) -> &'static str {
    match cert {
        Ok(c) => check(&mut store.clone(), inputs, &c).verdict.label(),
        Err(_) => "ERROR",
    }
}

/// The linearizer agrees with a copying reference linearizer, and
/// compaction keeps verdicts.
pub fn linearizer() -> Verdict {
    const TREES: usize = 1000;
    const CERTS: usize = 1000;
    // bit-blasting steps cannot be repeated, which copying would do
    const THEORIES: [Theory; 4] = [Theory::Sat, Theory::Prop, Theory::Euf, Theory::Lia];
    let mut rng = rng(0x0700);
    let mut labels: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    let mut trees = 0;
    while trees < TREES {
        let inst = generate(THEORIES[trees % THEORIES.len()], &mut rng);
        let p = &inst.problem;
        let n = p.inputs.len();
        let Some(np) = random_nested(&mut rng, &p.store, &inst.cert, n) else {
            continue;
        };
        trees += 1;
        let ours = label(
            &p.store,
            &p.inputs,
            linearize(&np, n).map_err(|e| e.to_string()),
        );
        let reference = label(
            &p.store,
            &p.inputs,
            reference_linearize(&np, n).map_err(|e| format!("{e:?}")),
        );
        *labels.entry(ours).or_default() += 1;
        if ours != reference {
            bad.push(format!("tree {trees}: {ours} vs reference {reference}"));
        }
    }
    let mut kept = 0;
    for k in 0..CERTS {
        let inst = generate(Theory::ALL[k % Theory::ALL.len()], &mut rng);
        let p = &inst.problem;
        let cert = if rng.gen_bool(0.5) {
            inst.cert.clone()
        } else {
            mutate_cert(&mut rng, &p.store, &inst.cert, p.inputs.len())
        };
        let before = label(&p.store, &p.inputs, Ok(cert.clone()));
        let small = compact(&mut p.store.clone(), &p.inputs, &cert);
        kept += small.steps.len();
        let after = label(&p.store, &p.inputs, Ok(small));
        if before != after {
            bad.push(format!("compaction {k}: {before} became {after}"));
        }
    }
    let summary: Vec<String> = labels.iter().map(|(k, v)| format!("{v} {k}")).collect();
    Verdict::new(
        bad.is_empty(),
        format!(
            "{TREES} trees ({}), {CERTS} compactions keeping {kept} steps, {} disagreements",
            summary.join(", "),
            bad.len()
        ) + &first(&bad),
    )
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["certkernel"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, None, &mut std::io::empty(), &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err),
    )
}

/// The in-repo corpus checks as documented in its manifest.
pub fn corpus() -> Verdict {
    const MIN_ENTRIES: usize = 30;
    const LIMIT_S: f64 = 30.0;
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let manifest = std::fs::read_to_string(dir.join("MANIFEST.tsv")).expect("corpus manifest");
    let started = Instant::now();
    let mut logics: BTreeMap<String, usize> = BTreeMap::new();
    let (mut entries, mut trusted) = (0, 0);
    let mut bad = Vec::new();
    for line in manifest
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let fields: Vec<&str> = line.split('\t').collect();
        let [problem, proof, expected, note] = fields[..] else {
            bad.push(format!("malformed manifest line `{line}`"));
            continue;
        };
        entries += 1;
        let (pp, qq) = (dir.join(problem), dir.join(proof));
        let text = std::fs::read_to_string(&pp).unwrap_or_default();
        let logic = if problem.ends_with(".cnf") {
            "DIMACS".to_string()
        } else {
            text.split("(set-logic ")
                .nth(1)
                .and_then(|r| r.split(')').next())
                .unwrap_or("?")
                .to_string()
        };
        *logics.entry(logic).or_default() += 1;
        let has_assume = std::fs::read_to_string(&qq)
            .unwrap_or_default()
            .contains(" assume ");
        let documented = note.starts_with("assume");
        let want = match expected {
            "valid" if !has_assume && !documented => 0,
            "trusted" if has_assume && documented => 2,
            _ => {
                bad.push(format!(
                    "{problem}: expectation `{expected}` does not match its certificate and notes"
                ));
                continue;
            }
        };
        trusted += usize::from(want == 2);
        let (code, out) = run_cli(&[
            "--problem",
            &pp.display().to_string(),
            "--proof",
            &qq.display().to_string(),
        ]);
        if code != want {
            bad.push(format!(
                "{problem}: exit {code}, expected {want}: {}",
                out.lines().next().unwrap_or("")
            ));
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let missing: Vec<&str> = ["DIMACS", "QF_UF", "QF_LIA", "QF_UFLIA", "QF_BV"]
        .into_iter()
        .filter(|l| !logics.contains_key(*l))
        .collect();
    let pass = bad.is_empty() && entries >= MIN_ENTRIES && missing.is_empty() && elapsed < LIMIT_S;
    let summary: Vec<String> = logics.iter().map(|(k, v)| format!("{v} {k}")).collect();
    Verdict::new(
        pass,
        format!(
            "{entries} problems ({}), {trusted} trusted as documented, {} failures, {elapsed:.2} s (limit {LIMIT_S} s)",
            summary.join(", "),
            bad.len()
        ) + &first(&bad)
            + &if missing.is_empty() { String::new() } else { format!("; missing {}", missing.join(" ")) },
    )
}

pub const THROUGHPUT_CHILD: &str = "--throughput-child";
const CHAIN_STEPS: usize = 100_000;

/// Runs in a child process so the memory high-water mark belongs to this
/// check alone.
pub fn throughput() -> Verdict {
    const LIMIT_MS: u128 = 5000;
    const LIMIT_KB: u64 = 500 * 1024;
    let exe = std::env::current_exe().expect("test binary path");
    let out = match Command::new(exe).arg(THROUGHPUT_CHILD).output() {
        Ok(o) => o,
        Err(e) => {
            return Verdict::new(false, format!("could not start the measuring process: {e}"))
        }
    };
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let field = |k: &str| -> Option<u128> {
        text.split_whitespace()
            .find_map(|kv| kv.strip_prefix(k)?.strip_prefix('=')?.parse().ok())
    };
    let (Some(ms), Some(kb), Some(code)) = (field("elapsed_ms"), field("hwm_kb"), field("code"))
    else {
        return Verdict::new(
            false,
            format!(
                "unexpected output: {text}{}",
                String::from_utf8_lossy(&out.stderr)
            ),
        );
    };
    let pass = code == 0 && ms < LIMIT_MS && (kb as u64) < LIMIT_KB;
    Verdict::new(
        pass,
        format!(
            "{CHAIN_STEPS}-step resolution certificate: exit {code}, {ms} ms (limit {LIMIT_MS}), peak RSS {} MB (limit {} MB)",
            kb / 1024,
            LIMIT_KB / 1024
        ),
    )
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

pub fn throughput_child() -> ExitCode {
    let chain = resolution_chain(CHAIN_STEPS);
    assert_eq!(chain.cert.steps.len(), CHAIN_STEPS);
    let dir = std::env::temp_dir().join(format!("certkernel-throughput-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let (problem, proof) = (dir.join("chain.cnf"), dir.join("chain.cert"));
    std::fs::write(&problem, print_dimacs(&chain.dimacs)).expect("write problem");
    std::fs::write(&proof, print_certificate(&TermStore::new(), &chain.cert))
        .expect("write certificate");
    drop(chain);
    let started = Instant::now();
    let (code, out) = run_cli(&[
        "--problem",
        &problem.display().to_string(),
        "--proof",
        &proof.display().to_string(),
    ]);
    let ms = started.elapsed().as_millis();
    let _ = std::fs::remove_dir_all(&dir);
    let kb = peak_rss_kb().map_or_else(|| "unknown".to_string(), |k| k.to_string());
    println!(
        "elapsed_ms={ms} hwm_kb={kb} code={code} output={}",
        out.trim().replace(char::is_whitespace, "_")
    );
    ExitCode::SUCCESS
}
