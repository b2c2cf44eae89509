//! Element-loop execution strategy.
//!
//! Assembly and error integration split the element range into contiguous
//! chunks and concatenate the per-chunk results in chunk order, so every
//! executor yields the same accumulation order as a serial loop.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

pub trait Executor: Sync {
    /// Runs `work` over a partition of `0..len` into contiguous ranges and
    /// returns the results in ascending range order.
    fn map_ranges<T, F>(&self, len: usize, work: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync;
}

/// Single-threaded executor; bitwise reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map_ranges<T, F>(&self, len: usize, work: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync,
    {
        vec![work(0..len)]
    }
}

/// Splits `0..len` into at most `parts` contiguous, nearly equal ranges.
pub fn split_range(len: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.max(1).min(len.max(1));
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for p in 0..parts {
        let size = base + usize::from(p < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}
