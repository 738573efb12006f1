//! Parallel Monte Carlo. Path i always uses stream i of the run seed, and
//! results are collected in path order, so the worker count never changes
//! the output.

use betadet_core::sampler::{sample_det_process, DetProcessPath, RngStream};
use betadet_core::{EnsembleParams, Result};
use rayon::prelude::*;

pub const THREADS_ENV: &str = "BETADET_THREADS";

/// Installs the global rayon pool sized by `BETADET_THREADS` when set.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn sample_paths(params: &EnsembleParams, paths: usize, seed: u64) -> Result<Vec<DetProcessPath>> {
    (0..paths)
        .into_par_iter()
        .map(|i| sample_det_process(params, &mut RngStream::new(seed, i as u64)))
        .collect()
}

/// Runs `f` on every stream 0..paths of `seed` in parallel, keeping order.
pub fn map_streams<T, F>(paths: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    (0..paths).into_par_iter().map(|i| f(&mut RngStream::new(seed, i as u64))).collect()
}

/// Values of each sampled path at index p (0 gives 0).
pub fn values_at(params: &EnsembleParams, paths: usize, seed: u64, p: usize) -> Result<Vec<f64>> {
    map_streams(paths, seed, |rng| Ok(sample_det_process(params, rng)?.value(p)))
}
