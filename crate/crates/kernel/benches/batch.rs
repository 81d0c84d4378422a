use certkernel_kernel::batch::{check_all, check_all_sequential, Job};
use certkernel_testkit::gen::{generate, Theory};
use certkernel_testkit::resolution_chain;
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn jobs() -> Vec<Job> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut jobs: Vec<Job> = (0..400)
        .map(|i| {
            let inst = generate(Theory::ALL[i % Theory::ALL.len()], &mut rng);
            Job {
                store: inst.problem.store,
                inputs: inst.problem.inputs,
                cert: inst.cert,
            }
        })
        .collect();
    for _ in 0..8 {
        let chain = resolution_chain(20_000);
        let p = chain.dimacs.to_problem();
        jobs.push(Job {
            store: p.store,
            inputs: p.inputs,
            cert: chain.cert,
        });
    }
    jobs
}

fn batch(c: &mut Criterion) {
    let jobs = jobs();
    let mut g = c.benchmark_group("check_batch");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter_batched(|| jobs.clone(), check_all, BatchSize::LargeInput)
    });
    g.bench_function("sequential", |b| {
        b.iter_batched(|| jobs.clone(), check_all_sequential, BatchSize::LargeInput)
    });
    g.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
