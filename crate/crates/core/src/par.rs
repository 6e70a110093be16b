//! Switch between rayon and plain iteration for the exhaustive loops.
//!
//! Without the `parallel` feature every [`Parallelism`] value runs
//! sequentially. Results never depend on the mode.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// `true` iff `f` holds on every index. Short-circuits in both modes.
pub fn all<F>(mode: Parallelism, range: Range<usize>, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return range.into_par_iter().all(f);
    }
    let _ = mode;
    range.into_iter().all(f)
}

/// Maps every index and collects in index order.
pub fn map<T, F>(mode: Parallelism, range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = mode;
    range.into_iter().map(f).collect()
}

/// Maps every item of a slice and collects in order.
pub fn map_slice<S, T, F>(mode: Parallelism, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Runs `f` on a dedicated pool of `workers` threads when parallel, or
/// directly otherwise. `workers == 0` uses the global pool.
pub fn with_workers<T, F>(mode: Parallelism, workers: usize, f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() && workers > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            return pool.install(f);
        }
    }
    let _ = (mode, workers);
    f()
}
