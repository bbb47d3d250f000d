//! Data-parallel sweeps over the odd integers of a range.
//!
//! The range is cut into fixed-size chunks independent of the worker count.
//! Each chunk folds into its own accumulator and accumulators are merged
//! pairwise, so any associative and commutative merge gives the same result
//! for every worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Odd integers per chunk.
pub const CHUNK_ODDS: u64 = 1 << 15;

/// Number of workers to use when the caller has no preference.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Number of odd integers in `[1, max]`.
pub fn odd_count(max: u64) -> u64 {
    max.div_ceil(2)
}

/// Folds `step` over every odd `m` in `[lo, hi]` using `workers` threads.
pub fn sweep_odd<A, I, F, M>(lo: u64, hi: u64, workers: usize, init: I, step: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, u128) -> Result<()> + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if workers == 0 {
        return Err(Error::InvalidArgument("workers must be at least 1".into()));
    }
    let first = if lo % 2 == 1 { lo } else { lo.saturating_add(1) };
    if lo > hi || first > hi {
        return Ok(init());
    }
    let total = (hi - first) / 2 + 1;
    let chunks = total.div_ceil(CHUNK_ODDS);

    let run_chunk = |c: u64| -> Result<A> {
        let mut acc = init();
        let start = c * CHUNK_ODDS;
        let end = (start + CHUNK_ODDS).min(total);
        for i in start..end {
            step(&mut acc, u128::from(first) + 2 * u128::from(i))?;
        }
        Ok(acc)
    };

    if workers == 1 {
        let mut acc = init();
        for c in 0..chunks {
            acc = merge(acc, run_chunk(c)?);
        }
        return Ok(acc);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(run_chunk)
            .try_reduce(&init, |a, b| Ok(merge(a, b)))
    })
}
