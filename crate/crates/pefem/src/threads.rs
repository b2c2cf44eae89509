//! Scoped-thread executor and the `PEFEM_THREADS` setting.

use pefem_core::exec::{split_range, Executor};
use std::ops::Range;

pub const THREADS_VAR: &str = "PEFEM_THREADS";

/// Runs chunks on scoped threads and returns them in range order. With one
/// thread it runs inline, which is bitwise identical to `Serial`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threaded {
    threads: usize,
}

impl Threaded {
    pub fn new(threads: usize) -> Self {
        Self { threads: threads.max(1) }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// Worker count from `PEFEM_THREADS`: unset means all available cores,
    /// `0` means single-threaded.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(THREADS_VAR) {
            Ok(v) => Ok(Self::new(parse_threads(&v)?)),
            Err(std::env::VarError::NotPresent) => Ok(Self::new(available())),
            Err(e) => Err(format!("{THREADS_VAR}: {e}")),
        }
    }

    /// Also hands the worker count to the sparse direct solver.
    pub fn install(self) -> Self {
        let par = if self.threads == 1 { faer::Par::Seq } else { faer::Par::rayon(self.threads) };
        faer::set_global_parallelism(par);
        self
    }
}

fn available() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn parse_threads(value: &str) -> Result<usize, String> {
    let n: usize = value.trim().parse().map_err(|_| format!("{THREADS_VAR}: `{value}` is not a thread count"))?;
    Ok(if n == 0 { 1 } else { n.min(available()) })
}

impl Executor for Threaded {
    fn map_ranges<T, F>(&self, len: usize, work: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync,
    {
        if self.threads == 1 || len < 2 * self.threads {
            return vec![work(0..len)];
        }
        let work = &work;
        std::thread::scope(|s| {
            let handles: Vec<_> = split_range(len, self.threads).into_iter().map(|r| s.spawn(move || work(r))).collect();
            handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect()
        })
    }
}
