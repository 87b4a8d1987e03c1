use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potts_core::{run_realization, ModelParams, RealizationSeed};
use crate::risk_stats::EnsembleStats;

/// Seed of realization `k` under `master`: ChaCha stream `k` of key `master`.
/// Injective in `k` over the whole `u64` range.
pub fn derive_seed(master: u64, k: u64) -> RealizationSeed {
    RealizationSeed::new(master, k)
}

/// Runs `k` independent realizations on the current rayon pool.
///
/// Each realization draws its own couplings and initial state from
/// `derive_seed(master_seed, index)`; results are collected in index order, so
/// the output does not depend on scheduling or thread count.
pub fn run_ensemble(params: &ModelParams, k: usize, master_seed: u64) -> Result<EnsembleStats> {
    params.validate()?;
    if k == 0 {
        return Err(Error::param("k", "need at least one realization"));
    }
    let nd_values = (0..k as u64)
        .into_par_iter()
        .map(|i| run_realization(params, derive_seed(master_seed, i)).map(|o| o.nd))
        .collect::<Result<Vec<_>>>()?;
    EnsembleStats::from_values(nd_values, 1)
}

/// A dedicated pool of `threads` workers; `None` means the global pool.
pub fn build_pool(threads: Option<usize>) -> Result<Option<rayon::ThreadPool>> {
    match threads {
        None => Ok(None),
        Some(0) => Err(Error::param("threads", "must be >= 1")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map(Some)
            .map_err(|e| Error::param("threads", e.to_string())),
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool for `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    Ok(match build_pool(threads)? {
        Some(pool) => pool.install(f),
        None => f(),
    })
}
