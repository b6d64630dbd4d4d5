//! Sequential or data-parallel evaluation of independent work items.

/// How to run independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled, otherwise runs sequentially.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Self::Parallel
        } else {
            Self::Sequential
        }
    }
}

/// `(0..n).map(f)` with results in index order regardless of mode.
pub fn map_range<T, F>(n: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..n).map(f).collect(),
        ExecMode::Parallel => parallel_map(n, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Runs `body` with at most `jobs` worker threads. `None` or zero keeps the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, body: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if let Some(j) = jobs.filter(|&j| j > 0) {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            return pool.install(body);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    body()
}
