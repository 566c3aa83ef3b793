//! Index-parallel map and count helpers.
//!
//! With the `parallel` feature these run on the rayon pool; without it they
//! are plain loops. Results are always gathered in index order and errors
//! are reported for the lowest failing index, so output never depends on
//! the backend or the thread count.

use crate::error::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluates `f(i)` for `i in 0..n`, returning results in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Like [`map_range`], but fallible; the first error by index wins.
pub fn try_map_range<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    map_range(n, f).into_iter().collect()
}

/// Fallible map over a slice of work items.
pub fn try_map_slice<I, T, F>(items: &[I], f: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let out: Vec<Result<T>> = items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    let out: Vec<Result<T>> = items.iter().map(f).collect();
    out.into_iter().collect()
}

/// Counts `i in 0..n` for which `pred(i)` holds.
pub fn count_range<F>(n: usize, pred: F) -> Result<u64>
where
    F: Fn(usize) -> Result<bool> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        // Integer sums are associative; only the error choice needs care.
        let hits: Vec<Result<u64>> = (0..n)
            .into_par_iter()
            .chunks(4096)
            .map(|chunk| {
                let mut count = 0;
                for i in chunk {
                    count += pred(i)? as u64;
                }
                Ok(count)
            })
            .collect();
        hits.into_iter().sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut count = 0;
        for i in 0..n {
            count += pred(i)? as u64;
        }
        Ok(count)
    }
}

/// Caps the worker count of the global pool. A no-op for sequential builds
/// or when the pool has already been initialized.
pub fn init_thread_pool(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// Whether this build evaluates work items in parallel.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
