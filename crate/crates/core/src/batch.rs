//! Batches of independent runs.
//!
//! With the `parallel` feature (default) work items are spread over the
//! rayon thread pool; without it they run in order on the calling thread.
//! Results keep the input order either way, so aggregated output does not
//! depend on scheduling.

/// Applies `f` to every item, possibly concurrently.
pub fn map_runs<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// Applies `f` to every item in order on the calling thread.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Runs `f(base_seed + r)` for `r` in `0..count`.
pub fn map_seeds<R, F>(base_seed: u64, count: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    let seeds: Vec<u64> = (0..count).map(|r| base_seed.wrapping_add(r)).collect();
    map_runs(&seeds, |&s| f(s))
}

/// Runs `f` with at most `threads` worker threads for [`map_runs`];
/// `0` keeps the default pool.
pub fn with_parallelism<R, F>(threads: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    if threads > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
