//! Sequential or rayon-backed execution of data-parallel loops.
//!
//! Every parallel loop in the crate goes through [`Execution`], so the
//! `parallel` feature and the worker count only change scheduling, never
//! results.

use std::num::NonZeroUsize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Execution {
    workers: NonZeroUsize,
}

impl Default for Execution {
    fn default() -> Self {
        Execution::available()
    }
}

impl Execution {
    pub fn sequential() -> Self {
        Execution {
            workers: NonZeroUsize::MIN,
        }
    }

    /// `0` means "all available cores".
    pub fn with_workers(workers: usize) -> Self {
        match NonZeroUsize::new(workers) {
            Some(workers) => Execution { workers },
            None => Execution::available(),
        }
    }

    pub fn available() -> Self {
        Execution {
            workers: std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN),
        }
    }

    pub fn workers(self) -> usize {
        self.workers.get()
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self.workers.get() > 1
    }

    /// `items.iter().map(f).collect()`, possibly on a pool of workers.
    /// Output order always matches input order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return self.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }

    /// Folds the index range `0..n` into per-worker accumulators and merges
    /// them. `merge` must be associative and commutative for the result to
    /// be independent of the worker count.
    pub fn fold_range<A, I, F, M>(self, n: u64, init: I, fold: F, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, u64) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return self.install(|| {
                (0..n)
                    .into_par_iter()
                    .fold(&init, |mut acc, i| {
                        fold(&mut acc, i);
                        acc
                    })
                    .reduce(&init, &merge)
            });
        }
        let _ = &merge;
        let mut acc = init();
        for i in 0..n {
            fold(&mut acc, i);
        }
        acc
    }

    #[cfg(feature = "parallel")]
    fn install<R: Send>(self, op: impl FnOnce() -> R + Send) -> R {
        if self.workers.get() == rayon::current_num_threads() {
            return op();
        }
        match rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.get())
            .build()
        {
            Ok(pool) => pool.install(op),
            Err(e) => {
                log::warn!(
                    "cannot build a pool of {} workers ({e}); using the global pool",
                    self.workers
                );
                op()
            }
        }
    }
}
