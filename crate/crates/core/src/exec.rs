//! Execution policy for the data-parallel loops.
//!
//! Work is always cut into fixed-size chunks whose boundaries depend only on
//! the problem size. Chunks may be evaluated in any order on any number of
//! workers; their partial results are collected by chunk index and reduced
//! sequentially, so floating-point output does not depend on the worker
//! count.

use std::ops::Range;

/// Number of work units per chunk.
pub const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Exec {
    /// Worker threads. `0` uses the global rayon pool, `1` runs inline.
    pub workers: usize,
}

impl Exec {
    pub const SEQUENTIAL: Exec = Exec { workers: 1 };

    pub fn with_workers(workers: usize) -> Self {
        Exec { workers }
    }

    pub fn is_sequential(&self) -> bool {
        self.workers == 1 || !cfg!(feature = "parallel")
    }

    /// Applies `f` to each chunk of `0..len` and returns the results in chunk
    /// order.
    pub fn map_chunks<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync + Send,
    {
        let n_chunks = len.div_ceil(CHUNK);
        let chunk = |c: usize| f(c * CHUNK..((c + 1) * CHUNK).min(len));
        if self.is_sequential() || n_chunks <= 1 {
            return (0..n_chunks).map(chunk).collect();
        }
        self.parallel(n_chunks, chunk)
    }

    /// Applies `f` to every index of `0..len`, preserving order.
    pub fn map_indices<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.map_chunks(len, |r| r.map(&f).collect::<Vec<_>>())
            .into_iter()
            .flatten()
            .collect()
    }

    #[cfg(feature = "parallel")]
    fn parallel<T, F>(&self, n_chunks: usize, chunk: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        use rayon::prelude::*;
        let run = || (0..n_chunks).into_par_iter().map(&chunk).collect();
        if self.workers == 0 {
            return run();
        }
        match rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
        {
            Ok(pool) => pool.install(run),
            Err(_) => (0..n_chunks).map(chunk).collect(),
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn parallel<T, F>(&self, n_chunks: usize, chunk: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n_chunks).map(chunk).collect()
    }
}
