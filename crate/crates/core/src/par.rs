//! Execution policy for the data-parallel loops (contours, replicates).
//!
//! With the `parallel` feature the work is spread over a rayon pool; without
//! it every policy runs sequentially. Callers index their work items, and
//! results always come back in index order, so output never depends on the
//! schedule.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Worker pool of the given size; 0 lets rayon choose.
    Parallel { threads: usize },
}

impl Default for Exec {
    fn default() -> Self {
        Exec::Parallel { threads: 0 }
    }
}

impl Exec {
    /// `--threads N` convention: 1 is sequential, 0 is automatic.
    pub fn from_threads(threads: usize) -> Self {
        if threads == 1 {
            Exec::Sequential
        } else {
            Exec::Parallel { threads }
        }
    }

    /// Evaluate `f(0..n)` and collect in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            Exec::Parallel { threads } => parallel_map(threads, n, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(threads: usize, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;

    let run = || (0..n).into_par_iter().map(&f).collect();
    if threads == 0 {
        return run();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(_threads: usize, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
