//! Independent checking runs over many problems.
//!
//! Each job owns its term store, so jobs share nothing and can run on any
//! thread. With the `parallel` feature the jobs are spread over the rayon
//! pool; results keep the input order either way.

use certkernel_core::{Clause, TermStore};

use crate::{check, Certificate, CheckResult};

#[derive(Debug, Clone)]
pub struct Job {
    pub store: TermStore,
    pub inputs: Vec<Clause>,
    pub cert: Certificate,
}

impl Job {
    pub fn run(mut self) -> CheckResult {
        check(&mut self.store, &self.inputs, &self.cert)
    }
}

/// Applies `f` to every item, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn map_jobs<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_jobs<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    map_jobs_sequential(items, f)
}

pub fn map_jobs_sequential<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

pub fn check_all(jobs: Vec<Job>) -> Vec<CheckResult> {
    map_jobs(jobs, Job::run)
}

pub fn check_all_sequential(jobs: Vec<Job>) -> Vec<CheckResult> {
    map_jobs_sequential(jobs, Job::run)
}
