//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) the helpers fan out over the
//! rayon pool; without it, or inside [`sequential`], they run in a plain
//! loop. Results are always returned in index order, so every reduction done
//! by callers sees the same sequence regardless of schedule.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Sequential,
    Parallel,
}

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Policy in effect on the calling thread.
pub fn current_policy() -> Policy {
    if cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(Cell::get) {
        Policy::Parallel
    } else {
        Policy::Sequential
    }
}

/// Runs `f` with every helper in this module forced onto the sequential path.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let prev = FORCE_SEQUENTIAL.with(|c| c.replace(true));
    let out = f();
    FORCE_SEQUENTIAL.with(|c| c.set(prev));
    out
}

/// Runs `f` under the given policy.
pub fn with_policy<R>(policy: Policy, f: impl FnOnce() -> R) -> R {
    match policy {
        Policy::Sequential => sequential(f),
        Policy::Parallel => {
            let prev = FORCE_SEQUENTIAL.with(|c| c.replace(false));
            let out = f();
            FORCE_SEQUENTIAL.with(|c| c.set(prev));
            out
        }
    }
}

/// `(0..len).map(f).collect()`, possibly in parallel.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if current_policy() == Policy::Parallel {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    (0..len).map(f).collect()
}

/// `items.iter().map(f).collect()`, possibly in parallel.
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if current_policy() == Policy::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// First index (in index order) for which `f` returns `Some`.
pub fn find_first<T, F>(len: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if current_policy() == Policy::Parallel {
        use rayon::prelude::*;
        return (0..len).into_par_iter().find_map_first(f);
    }
    (0..len).find_map(f)
}

/// `(a(), b())`, possibly evaluated concurrently.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if current_policy() == Policy::Parallel {
        return rayon::join(a, b);
    }
    (a(), b())
}

/// Caps the global pool. Only the first call in a process has an effect.
pub fn init_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}
