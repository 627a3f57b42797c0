//! Parallel driver for the isometry search.

use std::time::Instant;

use rayon::prelude::*;
use ultranorm_core::oracle::{EnumerationResult, IsometrySearch};
use ultranorm_core::{NormSpec, Result};

/// Runs the root branches of the search on `jobs` threads and merges them
/// in branch order, so the result matches the sequential search.
pub fn enumerate_parallel(
    q: u64,
    n: usize,
    spec: NormSpec,
    centred: bool,
    cap: u64,
    jobs: usize,
) -> Result<EnumerationResult> {
    let start = Instant::now();
    let search = IsometrySearch::new(q, n, spec, centred, cap)?;
    let branches = search.root_branches();
    let run = || -> Vec<_> { branches.par_iter().map(|&b| search.run_branch(b)).collect() };
    let outcomes = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    let mut result = search.finish(outcomes);
    result.duration = Some(start.elapsed());
    Ok(result)
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
